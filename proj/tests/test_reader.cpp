#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mammo/reader.hpp"
#include "mammo/rng.hpp"

#include <algorithm>
#include <cmath>

using namespace mammo;

namespace {

// independent oracle: exhaustive pairwise counting with half ties
double auc_brute(const std::vector<double>& s, const std::vector<int>& l)
{
    double num = 0;
    std::size_t n1 = 0, n0 = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!l[i])
            continue;
        ++n1;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (l[j])
                continue;
            if (s[i] > s[j])
                num += 1.0;
            else if (s[i] == s[j])
                num += 0.5;
        }
    }
    for (int li : l)
        n0 += !li;
    return num / (static_cast<double>(n1) * static_cast<double>(n0));
}

FeatureSet synthetic_features(int n, int dim, double separation, std::uint64_t seed)
{
    FeatureSet fs;
    CounterRng rng(seed, 0);
    for (int i = 0; i < n; ++i) {
        const int label = i % 2;
        std::vector<double> f(dim);
        for (int j = 0; j < dim; ++j)
            f[j] = rng.normal() + (label ? separation : -separation) * (j < 2 ? 1.0 : 0.0);
        fs.features.push_back(std::move(f));
        fs.labels.push_back(label);
        fs.case_ids.push_back(i);
    }
    return fs;
}

} // namespace

TEST_CASE("auc basics")
{
    CHECK(auc(std::vector<double> { 0.1, 0.9 }, std::vector<int> { 0, 1 }) == 1.0);
    CHECK(auc(std::vector<double> { 0.9, 0.1 }, std::vector<int> { 0, 1 }) == 0.0);
    CHECK(auc(std::vector<double> { 0.4, 0.4, 0.4, 0.4 }, std::vector<int> { 0, 1, 0, 1 }) == 0.5);

    const std::vector<double> s { 3, 1, 2, 4 };
    const std::vector<int> l { 1, 0, 0, 1 };
    CHECK(auc(s, l) == doctest::Approx(auc_brute(s, l)).epsilon(1e-14));

    CHECK_THROWS_AS(auc(std::vector<double> { 1, 2 }, std::vector<int> { 1, 1 }), DegenerateLabelsError);
}

TEST_CASE("auc equals exhaustive pairwise counting on random sets with ties")
{
    CounterRng rng(77, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 5 + static_cast<int>(rng.uniform_int(60));
        std::vector<double> s(n);
        std::vector<int> l(n);
        for (int i = 0; i < n; ++i) {
            s[i] = std::floor(rng.uniform() * 8) / 8.0; // coarse grid forces ties
            l[i] = rng.uniform() < 0.5;
        }
        bool pos = false, neg = false;
        for (int li : l)
            (li ? pos : neg) = true;
        if (!pos || !neg)
            continue;
        CHECK(std::abs(auc(s, l) - auc_brute(s, l)) < 1e-12);
    }
}

TEST_CASE("auc is invariant under strictly monotone score transforms")
{
    CounterRng rng(13, 0);
    std::vector<double> s(40);
    std::vector<int> l(40);
    for (int i = 0; i < 40; ++i) {
        s[i] = rng.normal();
        l[i] = i % 2;
    }
    const double base = auc(s, l);
    std::vector<double> t(40);
    for (int i = 0; i < 40; ++i)
        t[i] = std::exp(2.0 * s[i]) + 5.0;
    CHECK(auc(t, l) == doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("mrmc variance: degenerate designs rejected, identical readers have zero reader term")
{
    std::vector<int> labels;
    std::vector<double> row;
    CounterRng rng(5, 0);
    for (int i = 0; i < 30; ++i) {
        labels.push_back(i % 2);
        row.push_back(rng.normal() + (i % 2));
    }
    CHECK_THROWS_AS(mrmc_ci({ row }, labels), DesignError); // single reader

    std::vector<std::vector<double>> identical { row, row, row };
    const MrmcResult same = mrmc_ci(identical, labels);
    CHECK(same.reader_variance_component <= 1e-12); // zero up to fp rounding
    CHECK(same.variance >= 0.0);
    CHECK(same.ci_lo <= same.auc);
    CHECK(same.ci_hi >= same.auc);
    CHECK(same.auc == doctest::Approx(auc(row, labels)));

    // disagreeing readers have a positive reader term
    std::vector<std::vector<double>> readers { row, row, row };
    CounterRng rng2(6, 0);
    for (auto& r : readers)
        for (auto& v : r)
            v += 0.8 * rng2.normal();
    CHECK(mrmc_ci(readers, labels).reader_variance_component > 0.0);

    CHECK_THROWS_AS(mrmc_ci(identical, std::vector<int>(30, 1)), DesignError); // single class
    auto broken = identical;
    broken[1][3] = std::nan("");
    CHECK_THROWS_AS(mrmc_ci(broken, labels), DesignError);
    broken = identical;
    broken[2].pop_back();
    CHECK_THROWS_AS(mrmc_ci(broken, labels), DesignError);
}

TEST_CASE("mrmc CI width shrinks as the case count grows")
{
    auto study_width = (+[](int n_cases, std::uint64_t seed) {
        CounterRng rng(seed, 0);
        std::vector<int> labels(n_cases);
        std::vector<std::vector<double>> readers(3, std::vector<double>(n_cases));
        for (int i = 0; i < n_cases; ++i) {
            labels[i] = i % 2;
            for (int r = 0; r < 3; ++r)
                readers[r][i] = rng.normal() + 1.2 * labels[i];
        }
        const MrmcResult m = mrmc_ci(readers, labels);
        return m.ci_hi - m.ci_lo;
    });
    // average over a few draws to keep it stable
    double w40 = 0, w160 = 0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        w40 += study_width(40, s);
        w160 += study_width(160, s);
    }
    CHECK(w160 < w40);
}

TEST_CASE("image moments: conventions and brute force")
{
    Image2<double> constant(6, 6, 3.25);
    const Moments mc = image_moments(constant);
    CHECK(mc.mean == doctest::Approx(3.25));
    CHECK(mc.variance == 0.0);
    CHECK(mc.skewness == 0.0);
    CHECK(mc.kurtosis == 0.0);
    CHECK(mc.hyperskewness == 0.0);

    Image2<double> sym(4, 1);
    sym[0] = -1;
    sym[1] = 1;
    sym[2] = -1;
    sym[3] = 1;
    const Moments ms = image_moments(sym);
    CHECK(ms.mean == 0.0);
    CHECK(ms.variance == doctest::Approx(1.0));
    CHECK(ms.skewness == doctest::Approx(0.0));
    CHECK(ms.hyperskewness == doctest::Approx(0.0));

    // known 4-pixel image, moments computed directly
    Image2<double> img(2, 2);
    img[0] = 1;
    img[1] = 2;
    img[2] = 3;
    img[3] = 6;
    const double mean = 3.0;
    double m2 = 0, m3 = 0, m4 = 0, m5 = 0;
    for (double v : { 1.0, 2.0, 3.0, 6.0 }) {
        m2 += std::pow(v - mean, 2) / 4;
        m3 += std::pow(v - mean, 3) / 4;
        m4 += std::pow(v - mean, 4) / 4;
        m5 += std::pow(v - mean, 5) / 4;
    }
    const Moments mk = image_moments(img);
    CHECK(mk.mean == doctest::Approx(mean));
    CHECK(mk.variance == doctest::Approx(m2));
    CHECK(mk.skewness == doctest::Approx(m3 / std::pow(m2, 1.5)));
    CHECK(mk.kurtosis == doctest::Approx(m4 / (m2 * m2)));
    CHECK(mk.hyperskewness == doctest::Approx(m5 / std::pow(m2, 2.5)));
}

TEST_CASE("training separates a linearly separable toy set")
{
    const FeatureSet train = synthetic_features(128, 4, 3.0, 1);
    const FeatureSet val = synthetic_features(32, 4, 3.0, 2);
    const Reader r = train_reader(train, val, 7, nullptr);
    int correct = 0;
    for (std::size_t i = 0; i < train.features.size(); ++i) {
        const double s = r.score_features(train.features[i]);
        correct += (s > 0.5) == (train.labels[i] == 1);
    }
    CHECK(correct == static_cast<int>(train.features.size()));
}

TEST_CASE("training is seed-dependent but stable in validation AUC")
{
    const FeatureSet train = synthetic_features(200, 6, 0.8, 3);
    const FeatureSet val = synthetic_features(100, 6, 0.8, 4);
    const Reader r1 = train_reader(train, val, 1, nullptr);
    const Reader r2 = train_reader(train, val, 2, nullptr);
    CHECK(r1.weights != r2.weights);

    auto val_auc = [&](const Reader& r) {
        std::vector<double> s;
        for (const auto& f : val.features)
            s.push_back(r.score_features(f));
        return auc(s, val.labels);
    };
    CHECK(std::abs(val_auc(r1) - val_auc(r2)) < 0.1);

    const Reader r1b = train_reader(train, val, 1, nullptr);
    CHECK(r1.weights == r1b.weights); // deterministic for a fixed seed
}

TEST_CASE("label-permuted training lands near chance on held-out data")
{
    FeatureSet train = synthetic_features(200, 8, 0.0, 5); // no signal at all
    const FeatureSet test = synthetic_features(100, 8, 0.0, 6);
    const Reader r = train_reader(train, test, 9, nullptr);
    std::vector<double> s;
    for (const auto& f : test.features)
        s.push_back(r.score_features(f));
    const double a = auc(s, test.labels);
    CHECK(a >= 0.35);
    CHECK(a <= 0.65);
}

TEST_CASE("single-class training set raises")
{
    FeatureSet train = synthetic_features(32, 4, 1.0, 1);
    std::fill(train.labels.begin(), train.labels.end(), 1);
    CHECK_THROWS_AS(train_reader(train, train, 1, nullptr), DegenerateLabelsError);
}

TEST_CASE("score: neutral reader, determinism, positive-template response")
{
    auto bank = ChannelBank::standard();
    Reader neutral;
    neutral.bank = bank;
    neutral.weights.assign(bank->feature_count(), 0.0);
    neutral.bias = 0.0;
    Image2<float> zero(kReaderImageSize, kReaderImageSize, 0.0f);
    CHECK(neutral.score(zero) == doctest::Approx(0.5));
    CHECK(neutral.score(zero) == neutral.score(zero));

    // weight only one template's max response; pasting that template in
    // raises the score
    Reader probe;
    probe.bank = bank;
    probe.weights.assign(bank->feature_count(), 0.0);
    const int kidx = 5; // first isotropic blob kernel
    probe.weights[2 * kidx] = 1e-3; // small enough that the logistic cannot saturate

    CounterRng rng(21, 0);
    Image2<float> img(kReaderImageSize, kReaderImageSize);
    for (auto& v : img.data())
        v = static_cast<float>(rng.normal());
    Image2<float> boosted = img;
    const auto& k = bank->kernels()[kidx];
    const int off = (kReaderImageSize - k.nx()) / 2;
    for (int y = 0; y < k.ny(); ++y)
        for (int x = 0; x < k.nx(); ++x)
            boosted(off + x, off + y) += 40.0f * k(x, y);
    CHECK(probe.score(boosted) > probe.score(img));

    std::vector<double> wrong(3, 0.0);
    Reader bad;
    bad.bank = bank;
    bad.weights = wrong;
    CHECK_THROWS_AS(bad.score(zero), InvalidInputError);
}

TEST_CASE("downsampling block-averages exactly")
{
    Image2<double> big(448, 448);
    for (int y = 0; y < 448; ++y)
        for (int x = 0; x < 448; ++x)
            big(x, y) = x / 2 + 1000.0 * (y / 2);
    const Image2<float> small = downsample_to_reader(big);
    REQUIRE(small.nx() == 224);
    for (int y = 0; y < 224; ++y)
        for (int x = 0; x < 224; ++x)
            CHECK(small(x, y) == doctest::Approx(x + 1000.0 * y));
    Image2<double> tiny(100, 100, 1.0);
    CHECK_THROWS_AS(downsample_to_reader(tiny), InvalidInputError);
}

TEST_CASE("case set validation")
{
    CaseSet cs;
    ReaderCase c;
    c.image = Image2<float>(10, 10, 0.0f);
    cs.cases.push_back(c);
    CHECK_THROWS_AS(cs.validate(), InvalidInputError);

    cs.cases[0].image = Image2<float>(kReaderImageSize, kReaderImageSize, 0.0f);
    cs.cases[0].label = 2;
    CHECK_THROWS_AS(cs.validate(), InvalidInputError);
    cs.cases[0].label = 1;
    CHECK_NOTHROW(cs.validate());
    cs.cases[0].image(3, 3) = std::numeric_limits<float>::quiet_NaN();
    CHECK_THROWS_AS(cs.validate(), InvalidInputError);
}
