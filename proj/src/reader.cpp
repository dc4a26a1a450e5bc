#include "mammo/reader.hpp"

#include "mammo/parallel.hpp"
#include "mammo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mammo {

void CaseSet::validate() const
{
    for (const ReaderCase& c : cases) {
        if (c.image.nx() != kReaderImageSize || c.image.ny() != kReaderImageSize)
            throw InvalidInputError("reader case image must be 224x224");
        for (float v : c.image.data())
            if (!std::isfinite(v))
                throw InvalidInputError("reader case image contains non-finite pixels");
        if (c.label != 0 && c.label != 1)
            throw InvalidInputError("case labels must be 0 or 1");
    }
}

bool CaseSet::has_both_labels() const
{
    bool pos = false, neg = false;
    for (const ReaderCase& c : cases)
        (c.label ? pos : neg) = true;
    return pos && neg;
}

Image2<float> downsample_to_reader(const Image2<double>& img, int size)
{
    if (img.nx() < size || img.ny() < size)
        throw InvalidInputError("image smaller than reader input size");
    Image2<float> out(size, size);
    for (int ty = 0; ty < size; ++ty) {
        const int y0 = ty * img.ny() / size;
        int y1 = (ty + 1) * img.ny() / size;
        y1 = std::max(y1, y0 + 1);
        for (int tx = 0; tx < size; ++tx) {
            const int x0 = tx * img.nx() / size;
            int x1 = (tx + 1) * img.nx() / size;
            x1 = std::max(x1, x0 + 1);
            double acc = 0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    acc += img(x, y);
            out(tx, ty) = static_cast<float>(acc / ((y1 - y0) * (x1 - x0)));
        }
    }
    return out;
}

namespace {

    void normalize_kernel(Image2<float>& k)
    {
        double mean = 0;
        for (float v : k.data())
            mean += v;
        mean /= static_cast<double>(k.size());
        double ss = 0;
        for (float& v : k.data()) {
            v = static_cast<float>(v - mean);
            ss += static_cast<double>(v) * v;
        }
        const double norm = std::sqrt(ss);
        if (norm > 0)
            for (float& v : k.data())
                v = static_cast<float>(v / norm);
    }

    double laguerre(int n, double x)
    {
        double l0 = 1.0;
        if (n == 0)
            return l0;
        double l1 = 1.0 - x;
        for (int k = 1; k < n; ++k) {
            const double l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
            l0 = l1;
            l1 = l2;
        }
        return l1;
    }

} // namespace

std::shared_ptr<const ChannelBank> ChannelBank::standard()
{
    auto bank = std::make_shared<ChannelBank>();
    const int kp = bank->kernel_px_;
    const double c = (kp - 1) / 2.0;

    // Laguerre-Gauss channels
    const double a = 20.0; // px
    for (int n = 0; n < 5; ++n) {
        Image2<float> k(kp, kp);
        for (int y = 0; y < kp; ++y)
            for (int x = 0; x < kp; ++x) {
                const double r2 = (x - c) * (x - c) + (y - c) * (y - c);
                const double g = 2.0 * M_PI * r2 / (a * a);
                k(x, y) = static_cast<float>(std::exp(-g / 2.0) * laguerre(n, g));
            }
        normalize_kernel(k);
        bank->kernels_.push_back(std::move(k));
        bank->names_.push_back("lg" + std::to_string(n));
    }

    // isotropic blob detectors at the projected mass scales
    for (double sigma : { 4.0, 6.0, 9.0, 13.0 }) {
        Image2<float> k(kp, kp);
        const double s2a = 2.0 * sigma * sigma;
        const double s2b = 2.0 * (1.6 * sigma) * (1.6 * sigma);
        for (int y = 0; y < kp; ++y)
            for (int x = 0; x < kp; ++x) {
                const double r2 = (x - c) * (x - c) + (y - c) * (y - c);
                k(x, y) = static_cast<float>(std::exp(-r2 / s2a) / s2a - std::exp(-r2 / s2b) / s2b);
            }
        normalize_kernel(k);
        bank->kernels_.push_back(std::move(k));
        bank->names_.push_back("dog" + std::to_string(static_cast<int>(sigma)));
    }

    // oriented ridge detectors (spicule scale)
    for (double deg : { 0.0, 45.0, 90.0, 135.0 }) {
        const double th = deg * M_PI / 180.0;
        const double ct = std::cos(th), st = std::sin(th);
        Image2<float> k(kp, kp);
        const double su = 2.2, sv = 9.0;
        for (int y = 0; y < kp; ++y)
            for (int x = 0; x < kp; ++x) {
                const double u = (x - c) * ct + (y - c) * st;
                const double v = -(x - c) * st + (y - c) * ct;
                const double g1 = std::exp(-u * u / (2 * su * su) - v * v / (2 * sv * sv)) / su;
                const double g2 = std::exp(-u * u / (2 * 4 * su * su) - v * v / (2 * sv * sv)) / (2 * su);
                k(x, y) = static_cast<float>(g1 - g2);
            }
        normalize_kernel(k);
        bank->kernels_.push_back(std::move(k));
        bank->names_.push_back("ridge" + std::to_string(static_cast<int>(deg)));
    }
    return bank;
}

std::vector<double> ChannelBank::extract(const Image2<float>& img) const
{
    if (img.nx() != kReaderImageSize || img.ny() != kReaderImageSize)
        throw InvalidInputError("channel extraction expects a 224x224 image");

    // raw intensity statistics
    double mean = 0;
    for (float v : img.data())
        mean += v;
    mean /= static_cast<double>(img.size());
    double var = 0;
    for (float v : img.data())
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(img.size());
    const double sd = std::sqrt(var);

    // Segment the tissue: the open field is the bright end of the histogram,
    // attenuated pixels sit far below it. Template responses are pooled only
    // where the whole window lies inside tissue, otherwise the air-skin edge
    // dwarfs any interior structure.
    // The cut sits well below the open field so the bright penumbra ramp at
    // the breast margin is excluded along with the background.
    std::vector<float> sorted(img.data());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() * 95 / 100, sorted.end());
    const float open_level = sorted[sorted.size() * 95 / 100];
    const float tissue_cut = 0.35f * open_level;
    std::vector<std::uint8_t> tissue(img.size());
    std::size_t t_n = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        tissue[i] = img[i] < tissue_cut ? 1 : 0;
        t_n += tissue[i];
    }

    // Window eligibility and local means from integral images.
    const int n = kReaderImageSize;
    std::vector<std::uint32_t> mask_int(static_cast<std::size_t>(n + 1) * (n + 1), 0);
    std::vector<double> img_int(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * n + x;
            mask_int[(y + 1) * (n + 1) + (x + 1)] = tissue[i]
                + mask_int[y * (n + 1) + (x + 1)] + mask_int[(y + 1) * (n + 1) + x] - mask_int[y * (n + 1) + x];
            img_int[(y + 1) * (n + 1) + (x + 1)] = static_cast<double>(img[i])
                + img_int[y * (n + 1) + (x + 1)] + img_int[(y + 1) * (n + 1) + x] - img_int[y * (n + 1) + x];
        }
    const int kp = kernel_px_;
    auto box_mean = [&](int bx, int by) {
        const double s = img_int[(by + kp) * (n + 1) + (bx + kp)] - img_int[by * (n + 1) + (bx + kp)]
            - img_int[(by + kp) * (n + 1) + bx] + img_int[by * (n + 1) + bx];
        return s / (static_cast<double>(kp) * kp);
    };

    // a window is eligible when it sits entirely in tissue with an extra
    // margin: insertion geometry keeps masses deep, so a wide guard discards
    // boundary clutter without ever excluding a mass
    const int guard = 8;
    auto box_mask_g = [&](int bx, int by) {
        const int x0 = std::max(0, bx - guard), y0 = std::max(0, by - guard);
        const int x1 = std::min(n, bx + kp + guard), y1 = std::min(n, by + kp + guard);
        const std::uint32_t s = mask_int[y1 * (n + 1) + x1] - mask_int[y0 * (n + 1) + x1]
            - mask_int[y1 * (n + 1) + x0] + mask_int[y0 * (n + 1) + x0];
        return s == static_cast<std::uint32_t>(x1 - x0) * (y1 - y0);
    };
    const int n_out = (kReaderImageSize - kp) / stride_ + 1;
    std::vector<std::uint8_t> eligible(static_cast<std::size_t>(n_out) * n_out, 0);
    std::size_t n_eligible = 0;
    for (int oy = 0; oy < n_out; ++oy)
        for (int ox = 0; ox < n_out; ++ox) {
            const bool full = box_mask_g(ox * stride_, oy * stride_);
            eligible[static_cast<std::size_t>(oy) * n_out + ox] = full ? 1 : 0;
            n_eligible += full;
        }
    if (n_eligible == 0)
        std::fill(eligible.begin(), eligible.end(), 1); // degenerate mask: pool everywhere

    // Matched-filter significance: photon noise is Poisson, so a zero-mean
    // template response scales like sqrt(local intensity); dividing by it
    // makes deep and shallow regions comparable. A mass is a photon deficit,
    // so both polarities are pooled.
    const double eps = std::max(1e-12, 1e-3 * static_cast<double>(open_level));
    std::vector<double> feats;
    feats.reserve(feature_count());
    std::vector<std::vector<double>> blob_maps; // iso-DoG z maps for the scale-coherence features
    for (std::size_t ki = 0; ki < kernels_.size(); ++ki) {
        const Image2<float>& k = kernels_[ki];
        const bool keep_map = names_[ki].rfind("dog", 0) == 0;
        std::vector<double> zmap;
        if (keep_map)
            zmap.assign(static_cast<std::size_t>(n_out) * n_out, 0.0);
        double mx = -1e300, mn = 1e300;
        for (int oy = 0; oy < n_out; ++oy)
            for (int ox = 0; ox < n_out; ++ox) {
                if (!eligible[static_cast<std::size_t>(oy) * n_out + ox])
                    continue;
                const int bx = ox * stride_, by = oy * stride_;
                double acc = 0;
                for (int ky = 0; ky < kp; ++ky) {
                    const float* row = &img.data()[static_cast<std::size_t>(bx) + static_cast<std::size_t>(img.nx()) * (by + ky)];
                    const float* krow = &k.data()[static_cast<std::size_t>(kp) * ky];
                    for (int kx = 0; kx < kp; ++kx)
                        acc += static_cast<double>(row[kx]) * krow[kx];
                }
                const double z = acc / std::sqrt(std::max(box_mean(bx, by), 0.0) + eps);
                mx = std::max(mx, z);
                mn = std::min(mn, z);
                if (keep_map)
                    zmap[static_cast<std::size_t>(oy) * n_out + ox] = z;
            }
        feats.push_back(mx);
        feats.push_back(-mn);
        if (keep_map)
            blob_maps.push_back(std::move(zmap));
    }

    // Scale coherence: a real mass is a deficit at every blob scale at one
    // location, single-scale texture dips are not. The worst across-scale
    // maximum is that evidence.
    for (int lo = 0; lo + 3 <= static_cast<int>(blob_maps.size()); lo += 1) {
        double worst = 1e300;
        for (int oy = 0; oy < n_out; ++oy)
            for (int ox = 0; ox < n_out; ++ox) {
                const std::size_t i = static_cast<std::size_t>(oy) * n_out + ox;
                if (!eligible[i])
                    continue;
                double across = -1e300;
                for (int s = lo; s < lo + 3; ++s)
                    across = std::max(across, blob_maps[s][i]);
                worst = std::min(worst, across);
            }
        feats.push_back(worst >= 1e300 ? 0.0 : -worst);
    }

    feats.push_back(mean);
    feats.push_back(sd);
    return feats;
}

FeatureSet extract_features(const ChannelBank& bank, const CaseSet& cases, int threads)
{
    cases.validate();
    FeatureSet fs;
    fs.features.resize(cases.cases.size());
    fs.labels.resize(cases.cases.size());
    fs.case_ids.resize(cases.cases.size());
    parallel_for(cases.cases.size(), threads, [&](std::size_t i) {
        fs.features[i] = bank.extract(cases.cases[i].image);
        fs.labels[i] = cases.cases[i].label;
        fs.case_ids[i] = cases.cases[i].case_id;
    });
    return fs;
}

double Reader::score_features(std::span<const double> f) const
{
    if (f.size() != weights.size())
        throw InvalidInputError("feature dimension mismatch");
    double z = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double s = feat_scale.empty() ? 1.0 : feat_scale[i];
        const double m = feat_mean.empty() ? 0.0 : feat_mean[i];
        z += weights[i] * ((f[i] - m) * s);
    }
    return 1.0 / (1.0 + std::exp(-z));
}

double Reader::score(const Image2<float>& img) const
{
    if (!bank)
        throw InvalidInputError("reader has no channel bank");
    return score_features(bank->extract(img));
}

Reader train_reader(const FeatureSet& train, const FeatureSet& val, std::uint64_t seed,
    std::shared_ptr<const ChannelBank> bank, const TrainOptions& opts)
{
    if (train.features.empty())
        throw InvalidInputError("empty training set");
    bool pos = false, neg = false;
    for (int l : train.labels)
        (l ? pos : neg) = true;
    if (!pos || !neg)
        throw DegenerateLabelsError("training set contains a single class");

    const std::size_t n = train.features.size();
    const std::size_t dim = train.features[0].size();

    Reader r;
    r.bank = std::move(bank);
    r.training_seed = seed;
    r.feat_mean.assign(dim, 0.0);
    r.feat_scale.assign(dim, 1.0);
    for (const auto& f : train.features)
        for (std::size_t j = 0; j < dim; ++j)
            r.feat_mean[j] += f[j];
    for (std::size_t j = 0; j < dim; ++j)
        r.feat_mean[j] /= static_cast<double>(n);
    std::vector<double> sd(dim, 0.0);
    for (const auto& f : train.features)
        for (std::size_t j = 0; j < dim; ++j)
            sd[j] += (f[j] - r.feat_mean[j]) * (f[j] - r.feat_mean[j]);
    for (std::size_t j = 0; j < dim; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
        r.feat_scale[j] = sd[j] > 1e-12 ? 1.0 / sd[j] : 0.0;
    }

    auto standardized = [&](const FeatureSet& fs) {
        std::vector<std::vector<double>> out(fs.features.size());
        for (std::size_t i = 0; i < fs.features.size(); ++i) {
            out[i].resize(dim);
            for (std::size_t j = 0; j < dim; ++j)
                out[i][j] = (fs.features[i][j] - r.feat_mean[j]) * r.feat_scale[j];
        }
        return out;
    };
    const auto xs = standardized(train);
    const auto xv = standardized(val);

    CounterRng rng(seed, 0x7EA3);
    std::vector<double> w(dim);
    for (double& wi : w)
        wi = 0.01 * rng.normal();
    double b = 0;

    const double lr = opts.learning_rate * opts.lr_scale;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    auto val_auc = [&]() {
        if (xv.empty())
            return 0.5;
        std::vector<double> scores(xv.size());
        for (std::size_t i = 0; i < xv.size(); ++i) {
            double z = b;
            for (std::size_t j = 0; j < dim; ++j)
                z += w[j] * xv[i][j];
            scores[i] = z;
        }
        bool vp = false, vn = false;
        for (int l : val.labels)
            (l ? vp : vn) = true;
        if (!vp || !vn)
            return 0.5;
        return auc(scores, val.labels);
    };

    std::vector<double> best_w = w;
    double best_b = b, best_auc = -1;
    int stale = 0;
    std::vector<double> grad(dim);
    for (int epoch = 0; epoch < opts.max_epochs; ++epoch) {
        // Fisher-Yates with the epoch stream
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = rng.uniform_int(i + 1);
            std::swap(order[i], order[j]);
        }
        for (std::size_t start = 0; start < n; start += opts.batch_size) {
            const std::size_t stop = std::min(n, start + opts.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            double gb = 0;
            for (std::size_t k = start; k < stop; ++k) {
                const auto& x = xs[order[k]];
                double z = b;
                for (std::size_t j = 0; j < dim; ++j)
                    z += w[j] * x[j];
                const double p = 1.0 / (1.0 + std::exp(-z));
                const double g = p - train.labels[order[k]];
                for (std::size_t j = 0; j < dim; ++j)
                    grad[j] += g * x[j];
                gb += g;
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (std::size_t j = 0; j < dim; ++j)
                w[j] -= lr * (grad[j] * inv + opts.weight_decay * w[j]);
            b -= lr * gb * inv;
        }
        const double va = val_auc();
        if (va > best_auc + 1e-9) {
            best_auc = va;
            stale = 0;
        } else {
            ++stale;
        }
        // on plateaus keep the freshest weights; calibration keeps improving
        // after the ranking has saturated
        if (va >= best_auc - 1e-12) {
            best_w = w;
            best_b = b;
        }
        if (stale >= opts.patience)
            break;
    }

    // fold the standardization into the stored affine head
    r.weights = best_w;
    r.bias = best_b;
    return r;
}

Reader train_reader(const CaseSet& train, const CaseSet& val, std::uint64_t seed, const TrainOptions& opts)
{
    auto bank = ChannelBank::standard();
    const FeatureSet ft = extract_features(*bank, train);
    const FeatureSet fv = extract_features(*bank, val);
    return train_reader(ft, fv, seed, bank, opts);
}

double auc(std::span<const double> scores, std::span<const int> labels)
{
    if (scores.size() != labels.size() || scores.empty())
        throw InvalidInputError("auc: scores and labels must match and be non-empty");
    std::size_t n1 = 0, n0 = 0;
    for (int l : labels)
        (l ? n1 : n0)++;
    if (n1 == 0 || n0 == 0)
        throw DegenerateLabelsError("auc requires both classes");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over tie groups
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && scores[idx[j + 1]] == scores[idx[i]])
            ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            if (labels[idx[k]])
                rank_sum_pos += midrank;
        i = j + 1;
    }
    return (rank_sum_pos - static_cast<double>(n1) * (n1 + 1) / 2.0) / (static_cast<double>(n1) * static_cast<double>(n0));
}

MrmcResult mrmc_ci(const std::vector<std::vector<double>>& reader_scores, const std::vector<int>& labels)
{
    const std::size_t n_readers = reader_scores.size();
    if (n_readers < 2)
        throw DesignError("mrmc_ci requires at least 2 readers");
    const std::size_t n_cases = labels.size();
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n_cases; ++i)
        (labels[i] ? pos : neg).push_back(i);
    if (pos.size() < 2 || neg.size() < 2)
        throw DesignError("mrmc_ci requires at least 2 cases per class");
    for (const auto& row : reader_scores) {
        if (row.size() != n_cases)
            throw DesignError("mrmc_ci requires a fully-crossed score matrix");
        for (double s : row)
            if (!std::isfinite(s))
                throw DesignError("mrmc_ci: non-finite score");
    }

    const std::size_t n1 = pos.size(), n0 = neg.size();
    const double R = static_cast<double>(n_readers);

    // success matrices and their margins per reader
    std::vector<std::vector<double>> s(n_readers); // n1*n0
    std::vector<std::vector<double>> rowsum(n_readers), colsum(n_readers);
    std::vector<double> total(n_readers), sumsq(n_readers);
    MrmcResult out;
    for (std::size_t r = 0; r < n_readers; ++r) {
        s[r].resize(n1 * n0);
        rowsum[r].assign(n1, 0.0);
        colsum[r].assign(n0, 0.0);
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t b = 0; b < n0; ++b) {
                const double xp = reader_scores[r][pos[a]];
                const double xn = reader_scores[r][neg[b]];
                const double v = xp > xn ? 1.0 : (xp == xn ? 0.5 : 0.0);
                s[r][a * n0 + b] = v;
                rowsum[r][a] += v;
                colsum[r][b] += v;
                total[r] += v;
                sumsq[r] += v * v;
            }
        out.per_reader_auc.push_back(total[r] / (static_cast<double>(n1) * static_cast<double>(n0)));
    }
    double pooled = 0;
    for (double a : out.per_reader_auc)
        pooled += a;
    pooled /= R;
    out.auc = pooled;

    // second moments of the success matrix under same/independent pairings of
    // reader, positive case, and negative case (with-replacement draws)
    const double N1 = static_cast<double>(n1), N0 = static_cast<double>(n0);
    double v_sss = 0, v_ssi = 0, v_sis = 0, v_sii = 0;
    for (std::size_t r = 0; r < n_readers; ++r) {
        v_sss += sumsq[r];
        for (std::size_t a = 0; a < n1; ++a)
            v_ssi += rowsum[r][a] * rowsum[r][a];
        for (std::size_t b = 0; b < n0; ++b)
            v_sis += colsum[r][b] * colsum[r][b];
        v_sii += total[r] * total[r];
    }
    v_sss /= R * N1 * N0;
    v_ssi /= R * N1 * N0 * N0;
    v_sis /= R * N1 * N1 * N0;
    v_sii /= R * N1 * N1 * N0 * N0;

    double v_iss = 0, v_isi = 0, v_iis = 0;
    {
        std::vector<double> acc(n1 * n0, 0.0);
        for (std::size_t r = 0; r < n_readers; ++r)
            for (std::size_t k = 0; k < n1 * n0; ++k)
                acc[k] += s[r][k];
        for (double v : acc)
            v_iss += v * v;
        std::vector<double> racc(n1, 0.0), cacc(n0, 0.0);
        for (std::size_t r = 0; r < n_readers; ++r) {
            for (std::size_t a = 0; a < n1; ++a)
                racc[a] += rowsum[r][a];
            for (std::size_t b = 0; b < n0; ++b)
                cacc[b] += colsum[r][b];
        }
        for (double v : racc)
            v_isi += v * v;
        for (double v : cacc)
            v_iis += v * v;
    }
    v_iss /= R * R * N1 * N0;
    v_isi /= R * R * N1 * N0 * N0;
    v_iis /= R * R * N1 * N1 * N0;
    const double v_iii = pooled * pooled;

    const double pr_s = 1.0 / R, pr_i = 1.0 - pr_s;
    const double pi_s = 1.0 / N1, pi_i = 1.0 - pi_s;
    const double pj_s = 1.0 / N0, pj_i = 1.0 - pj_s;

    const double second_moment = pr_s * (pi_s * (pj_s * v_sss + pj_i * v_ssi) + pi_i * (pj_s * v_sis + pj_i * v_sii))
        + pr_i * (pi_s * (pj_s * v_iss + pj_i * v_isi) + pi_i * (pj_s * v_iis + pj_i * v_iii));
    out.variance = std::max(0.0, second_moment - pooled * pooled);

    // contribution of reader resampling alone (zero when readers agree)
    const double same_r = pi_s * (pj_s * v_sss + pj_i * v_ssi) + pi_i * (pj_s * v_sis + pj_i * v_sii);
    const double diff_r = pi_s * (pj_s * v_iss + pj_i * v_isi) + pi_i * (pj_s * v_iis + pj_i * v_iii);
    out.reader_variance_component = std::max(0.0, pr_s * (same_r - diff_r));

    const double half = 1.959963984540054 * std::sqrt(out.variance);
    out.ci_lo = std::max(0.0, pooled - half);
    out.ci_hi = std::min(1.0, pooled + half);
    return out;
}

namespace {

    template <typename T>
    Moments moments_impl(const Image2<T>& img)
    {
        if (img.size() == 0)
            throw InvalidInputError("image_moments: empty image");
        const double n = static_cast<double>(img.size());
        double mean = 0;
        for (const T& v : img.data())
            mean += static_cast<double>(v);
        mean /= n;
        double m2 = 0, m3 = 0, m4 = 0, m5 = 0;
        for (const T& v : img.data()) {
            const double d = static_cast<double>(v) - mean;
            const double d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
            m5 += d2 * d2 * d;
        }
        m2 /= n;
        m3 /= n;
        m4 /= n;
        m5 /= n;
        Moments out;
        out.mean = mean;
        out.variance = m2;
        if (m2 > 0) {
            const double sd = std::sqrt(m2);
            out.skewness = m3 / (sd * sd * sd);
            out.kurtosis = m4 / (m2 * m2);
            out.hyperskewness = m5 / (m2 * m2 * sd);
        }
        return out;
    }

} // namespace

Moments image_moments(const Image2<double>& img) { return moments_impl(img); }
Moments image_moments(const Image2<float>& img) { return moments_impl(img); }

} // namespace mammo
