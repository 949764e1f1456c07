#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "photostat/errors.hpp"
#include "photostat/forward.hpp"
#include "photostat/rng.hpp"
#include "photostat/sampler.hpp"
#include "photostat/stats.hpp"

#include <algorithm>
#include <cmath>

using namespace photostat;

TEST_CASE("accumulate: hand arithmetic") {
    StatAccumulator acc(2, CovarianceSpec::full());
    acc.accumulate({1, 2});
    acc.accumulate({3, 4});
    CHECK(acc.count() == 2);
    CHECK(acc.sums()[0] == 4);
    CHECK(acc.sums()[1] == 6);
    CHECK(acc.sums_of_squares()[0] == 10);
    CHECK(acc.sums_of_squares()[1] == 20);
    CHECK(acc.cross(0, 1) == 14); // 1*2 + 3*4
    CHECK(acc.cross(1, 0) == 14);
    CHECK(acc.cross(0, 0) == acc.sums_of_squares()[0]);
}

TEST_CASE("finalize: hand arithmetic") {
    StatAccumulator acc(2, CovarianceSpec::full());
    acc.accumulate({1, 2});
    acc.accumulate({3, 4});
    const auto s = acc.finalize();
    CHECK(s.mean == std::vector<double>{2.0, 3.0});
    CHECK(s.variance == std::vector<double>{2.0, 2.0});
    CHECK(s.z == std::vector<double>{0.0, -1.0});
    CHECK(s.cov_raw.at(0, 1) == 2.0);
    CHECK(s.cov_raw.at(1, 0) == 2.0);
    CHECK(s.cov_raw.at(0, 0) == 2.0);
    CHECK(s.cov_corrected.at(0, 0) == 0.0);
    CHECK(s.cov_corrected.at(1, 1) == -1.0);
    CHECK(s.cov_corrected.at(0, 1) == 2.0);
}

TEST_CASE("finalize: fewer than two samples is an error") {
    StatAccumulator acc(2);
    CHECK_THROWS_AS(acc.finalize(), insufficient_samples_error);
    acc.accumulate({1, 1});
    CHECK_THROWS_AS(acc.finalize(), insufficient_samples_error);
}

TEST_CASE("identical images have zero variance and z = -mean") {
    StatAccumulator acc(3, CovarianceSpec::full());
    for (int i = 0; i < 5; ++i)
        acc.accumulate({7, 0, 3});
    const auto s = acc.finalize();
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(s.variance[k] == 0.0);
        CHECK(s.z[k] == -s.mean[k]);
    }
    CHECK(s.cov_raw.at(0, 2) == 0.0);
}

TEST_CASE("accumulate: shape mismatch and z-consistency") {
    StatAccumulator acc(2);
    CHECK_THROWS_AS(acc.accumulate({1, 2, 3}), std::invalid_argument);

    RngStream rng(11, 0, 0, 0);
    for (int i = 0; i < 40; ++i)
        acc.accumulate({std::uint32_t(rng() % 100), std::uint32_t(rng() % 100)});
    const auto s = acc.finalize();
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(s.z[k] == s.variance[k] - s.mean[k]); // same floating sequence
}

TEST_CASE("merge: identity, commutativity, shape checks") {
    const CovarianceSpec spec = CovarianceSpec::slices({0, 2});
    StatAccumulator a(3, spec), b(3, spec), empty(3, spec);
    RngStream rng(12, 0, 0, 0);
    auto random_image = [&] {
        return SampleImage{std::uint32_t(rng() % 50), std::uint32_t(rng() % 50),
                           std::uint32_t(rng() % 50)};
    };
    for (int i = 0; i < 10; ++i)
        a.accumulate(random_image());
    for (int i = 0; i < 7; ++i)
        b.accumulate(random_image());

    StatAccumulator a_copy = a;
    a_copy.merge(empty);
    CHECK(a_copy.sums() == a.sums());
    CHECK(a_copy.count() == a.count());

    StatAccumulator ab = a, ba = b;
    ab.merge(b);
    ba.merge(a);
    CHECK(ab.sums() == ba.sums());
    CHECK(ab.sums_of_squares() == ba.sums_of_squares());
    CHECK(ab.count() == ba.count());
    for (int l = 0; l < 3; ++l) {
        CHECK(ab.cross(0, l) == ba.cross(0, l));
        CHECK(ab.cross(2, l) == ba.cross(2, l));
    }

    StatAccumulator other_shape(4, spec);
    CHECK_THROWS_AS(a.merge(other_shape), std::invalid_argument);
    StatAccumulator other_mode(3, CovarianceSpec::full());
    CHECK_THROWS_AS(a.merge(other_mode), std::invalid_argument);
}

TEST_CASE("merge: any partition reproduces the single pass bit for bit") {
    RngStream rng(13, 0, 0, 0);
    const std::size_t k_count = 5;
    const int n_images = 100;

    std::vector<SampleImage> stack;
    for (int i = 0; i < n_images; ++i) {
        SampleImage img(k_count);
        for (auto& c : img)
            c = std::uint32_t(rng() % 1000);
        stack.push_back(img);
    }

    const CovarianceSpec spec = CovarianceSpec::full();
    StatAccumulator whole(k_count, spec);
    for (const auto& img : stack)
        whole.accumulate(img);
    const auto whole_fin = whole.finalize();

    for (int trial = 0; trial < 50; ++trial) {
        // split into 7 random contiguous parts
        std::vector<int> cuts{0, n_images};
        for (int c = 0; c < 6; ++c)
            cuts.push_back(int(rng() % (n_images + 1)));
        std::sort(cuts.begin(), cuts.end());

        StatAccumulator merged(k_count, spec);
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            StatAccumulator part(k_count, spec);
            for (int i = cuts[p]; i < cuts[p + 1]; ++i)
                part.accumulate(stack[std::size_t(i)]);
            merged.merge(part);
        }
        const auto fin = merged.finalize();
        CHECK(fin.mean == whole_fin.mean);
        CHECK(fin.variance == whole_fin.variance);
        CHECK(fin.z == whole_fin.z);
        bool cov_equal = true;
        for (std::size_t k = 0; k < k_count; ++k)
            for (std::size_t l = 0; l < k_count; ++l)
                cov_equal = cov_equal &&
                            fin.cov_raw.at(int(k), int(l)) == whole_fin.cov_raw.at(int(k), int(l));
        CHECK(cov_equal);
    }
}

TEST_CASE("covariance is bit-exactly symmetric") {
    RngStream rng(14, 0, 0, 0);
    StatAccumulator acc(6, CovarianceSpec::full());
    for (int i = 0; i < 200; ++i) {
        SampleImage img(6);
        for (auto& c : img)
            c = std::uint32_t(rng() % 97);
        acc.accumulate(img);
    }
    const auto s = acc.finalize();
    for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l)
            CHECK(s.cov_raw.at(k, l) == s.cov_raw.at(l, k));
}

TEST_CASE("cauchy-schwarz: sumsq >= sum^2 / n") {
    RngStream rng(15, 0, 0, 0);
    StatAccumulator acc(4);
    for (int i = 0; i < 250; ++i) {
        SampleImage img(4);
        for (auto& c : img)
            c = std::uint32_t(rng() % 33);
        acc.accumulate(img);
        for (std::size_t k = 0; k < 4; ++k) {
            const double sum = double(acc.sums()[k]);
            CHECK(double(acc.sums_of_squares()[k]) >= sum * sum / double(acc.count()) - 1e-9);
        }
    }
}

TEST_CASE("bessel correction: variance estimator is unbiased against the oracle") {
    // many tiny stacks of transformed draws; the mean of the finalized
    // variances must approach the effective variance
    const double mean = 10.0, q = 0.2;
    const auto eff = effective_source_moments(mean, q);
    const double var_eff = eff.z + eff.mean;

    const int stacks = 30000;
    const int per_stack = 4;
    RngStream rng(16, 0, 0, 0);
    double acc_var = 0.0;
    for (int s = 0; s < stacks; ++s) {
        StatAccumulator a(1);
        for (int i = 0; i < per_stack; ++i) {
            const auto c = sample_source_counts(mean, q, rng);
            a.accumulate({std::uint32_t(c)});
        }
        acc_var += a.finalize().variance[0];
    }
    const double mean_of_vars = acc_var / stacks;
    // SE of the average of n=4 sample variances ~ sqrt(2/(n-1)) sigma^2 / sqrt(stacks)
    const double se = std::sqrt(2.0 / (per_stack - 1)) * var_eff / std::sqrt(double(stacks));
    CHECK(std::abs(mean_of_vars - var_eff) < 5.0 * se);
}

TEST_CASE("slices mode accumulates exactly the requested rows") {
    StatAccumulator acc(4, CovarianceSpec::slices({1, 3}));
    acc.accumulate({1, 2, 3, 4});
    acc.accumulate({4, 3, 2, 1});
    const auto s = acc.finalize();
    CHECK(s.cov_raw.has_row(1));
    CHECK(s.cov_raw.has_row(3));
    CHECK(!s.cov_raw.has_row(0));
    CHECK_THROWS_AS(s.cov_raw.at(0, 1), std::invalid_argument);
    // symmetric pair accumulated in both rows agrees bit-exactly
    CHECK(s.cov_raw.at(1, 3) == s.cov_raw.at(3, 1));
    CHECK(s.cov_corrected.at(1, 1) == s.z[1]);
}
