#pragma once

#include "mammo/core.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mammo {

inline constexpr int kReaderImageSize = 224;

struct CaseMeta {
    DensityClass breast_density = DensityClass::Fatty;
    double mass_size_mm = 0; // 0 for signal-absent
    double mass_density = 0;
    int dose_percent = 100;
};

struct ReaderCase {
    Image2<float> image; // 224 x 224, single channel
    int label = 0; // 1 = mass present
    CaseMeta meta;
    std::uint64_t case_id = 0;
};

enum class Split {
    Train,
    Val,
    Test,
};

struct CaseSet {
    std::vector<ReaderCase> cases;
    Split split = Split::Train;

    void validate() const;
    bool has_both_labels() const;
};

// box-mean resample of an arbitrary image to the reader input size
Image2<float> downsample_to_reader(const Image2<double>& img, int size = kReaderImageSize);

// Fixed template bank: rotationally symmetric Laguerre-Gauss channels plus
// isotropic and oriented difference-of-Gaussian filters. Templates are slid
// over the image (strided) and pooled, so detection needs no location prior.
class ChannelBank {
public:
    static std::shared_ptr<const ChannelBank> standard();

    int kernel_px() const { return kernel_px_; }
    int stride() const { return stride_; }
    const std::vector<Image2<float>>& kernels() const { return kernels_; }
    const std::vector<std::string>& names() const { return names_; }
    int blob_scale_count() const
    {
        int n = 0;
        for (const std::string& s : names_)
            n += s.rfind("dog", 0) == 0;
        return n;
    }
    int feature_count() const
    {
        return static_cast<int>(kernels_.size()) * 2 + std::max(0, blob_scale_count() - 2) + 2;
    }

    // per kernel the extreme significance of both polarities, plus
    // across-scale blob coherence and the raw image mean / standard deviation
    std::vector<double> extract(const Image2<float>& img) const;

private:
    int kernel_px_ = 49;
    int stride_ = 2;
    std::vector<Image2<float>> kernels_;
    std::vector<std::string> names_;
};

struct FeatureSet {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    std::vector<std::uint64_t> case_ids;
};

FeatureSet extract_features(const ChannelBank& bank, const CaseSet& cases, int threads = 1);

struct TrainOptions {
    int batch_size = 64;
    double learning_rate = 1e-4; // per-sample base step
    double lr_scale = 200.0; // applied to standardized features
    double weight_decay = 1e-3;
    int max_epochs = 400;
    int patience = 40; // epochs without val AUC improvement
};

// Channelized linear reader: fixed feature extraction, logistic head.
struct Reader {
    std::shared_ptr<const ChannelBank> bank;
    std::vector<double> weights;
    double bias = 0;
    std::vector<double> feat_mean, feat_scale;
    std::uint64_t training_seed = 0;

    double score_features(std::span<const double> f) const;
    double score(const Image2<float>& img) const;
};

Reader train_reader(const FeatureSet& train, const FeatureSet& val, std::uint64_t seed,
    std::shared_ptr<const ChannelBank> bank, const TrainOptions& opts = {});
Reader train_reader(const CaseSet& train, const CaseSet& val, std::uint64_t seed,
    const TrainOptions& opts = {});

// Mann-Whitney AUC, ties counted half
double auc(std::span<const double> scores, std::span<const int> labels);

struct MrmcResult {
    double auc = 0; // pooled over readers
    double variance = 0;
    double ci_lo = 0, ci_hi = 0; // 95%, clipped to [0,1]
    double reader_variance_component = 0;
    std::vector<double> per_reader_auc;
};

// Fully-crossed multi-reader multi-case AUC variance from success-matrix
// moments (equals the infinite-replicate reader-and-case bootstrap).
MrmcResult mrmc_ci(const std::vector<std::vector<double>>& reader_scores, const std::vector<int>& labels);

struct Moments {
    double mean = 0, variance = 0, skewness = 0, kurtosis = 0, hyperskewness = 0;
};

// mean plus standardized central moments of orders 2-5; zero-variance images
// report zeros for the higher moments
Moments image_moments(const Image2<double>& img);
Moments image_moments(const Image2<float>& img);

} // namespace mammo
