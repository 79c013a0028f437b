#include "sumform/simplex.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sumform {

Distribution Distribution::validated(std::vector<Scalar> components) {
    if (components.size() < 2)
        fail("too-few-components", "a distribution needs at least 2 components");
    Backend b = components.front().backend();
    for (const Scalar& c : components)
        if (c.backend() != b)
            fail("backend-mismatch", "distribution components mix backends");
    Scalar sum = Scalar::zero(b);
    for (const Scalar& c : components) {
        if (c.sign() < 0 || (Scalar::one(b) - c).sign() < 0)
            fail("component-out-of-range", "component " + c.str() + " is outside [0,1]");
        sum += c;
    }
    if (b == Backend::exact) {
        if (!sum.is_one())
            fail("sum-not-one", "components sum to " + sum.str() + ", expected 1");
    } else {
        if (std::abs(sum.float_value() - 1.0) > 1e-12)
            fail("sum-not-one", "components sum to " + sum.str() + ", expected 1");
    }
    return Distribution(std::move(components));
}

Distribution Distribution::to_float() const {
    std::vector<Scalar> out;
    out.reserve(components_.size());
    for (const Scalar& c : components_) out.push_back(Scalar::of_double(c.to_double()));
    return validated(std::move(out));
}

std::string Distribution::csv() const {
    std::string out;
    for (size_t i = 0; i < components_.size(); ++i) {
        if (i) out += ",";
        out += components_[i].str();
    }
    return out;
}

Distribution Distribution::parse_csv(const std::string& row, Backend backend) {
    std::vector<Scalar> comps;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ','))
        comps.push_back(Scalar::parse(cell, backend));
    return validated(std::move(comps));
}

namespace {

void enumerate_rec(int remaining, int slots, std::vector<long>& acc, long d,
                   std::vector<Distribution>& out) {
    if (slots == 1) {
        acc.push_back(remaining);
        std::vector<Scalar> comps;
        comps.reserve(acc.size());
        for (long k : acc) comps.push_back(Scalar::exact(make_rational_value(k, d)));
        out.push_back(Distribution::validated(std::move(comps)));
        acc.pop_back();
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        acc.push_back(k);
        enumerate_rec(remaining - k, slots - 1, acc, d, out);
        acc.pop_back();
    }
}

} // namespace

std::vector<Distribution> enumerate_grid(int n, int d) {
    if (n < 2) fail("too-few-components", "grid needs n >= 2");
    if (d < 1) fail("invalid-grid-resolution", "grid needs d >= 1");
    std::vector<Distribution> out;
    std::vector<long> acc;
    enumerate_rec(d, n, acc, d, out);
    return out;
}

Distribution sample_random(int n, std::uint64_t seed, int zero_count) {
    if (n < 2) fail("too-few-components", "a distribution needs at least 2 components");
    if (zero_count < 0 || zero_count > n - 1)
        fail("zero-count-too-large", "zero_count must lie in [0, n-1]");
    std::mt19937_64 rng(seed);
    // Fisher-Yates with explicit modulo draws keeps the sequence identical
    // across standard libraries.
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    std::vector<bool> zero(static_cast<size_t>(n), false);
    for (int i = 0; i < zero_count; ++i) zero[static_cast<size_t>(idx[static_cast<size_t>(i)])] = true;

    std::vector<mpz_class> nums(static_cast<size_t>(n), mpz_class(0));
    mpz_class total(0);
    for (int i = 0; i < n; ++i) {
        if (zero[static_cast<size_t>(i)]) continue;
        mpz_class v(static_cast<unsigned long>(1 + rng() % 1000));
        nums[static_cast<size_t>(i)] = v;
        total += v;
    }
    std::vector<Scalar> comps;
    comps.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        comps.push_back(Scalar::exact(make_rational_value(nums[static_cast<size_t>(i)], total)));
    return Distribution::validated(std::move(comps));
}

ProductMatrix product_matrix(const Distribution& p, const Distribution& q) {
    if (p.backend() != q.backend())
        fail("backend-mismatch", "product matrix needs a single backend");
    ProductMatrix pm;
    pm.rows = p.size();
    pm.cols = q.size();
    pm.entries.reserve(static_cast<size_t>(pm.rows) * static_cast<size_t>(pm.cols));
    for (int i = 0; i < pm.rows; ++i)
        for (int j = 0; j < pm.cols; ++j)
            pm.entries.push_back(p[i] * q[j]);
    return pm;
}

std::vector<Distribution> irrational_distributions(int n) {
    if (n < 3) fail("too-few-components", "irrational fixtures need n >= 3");
    auto pad = [n](std::vector<Scalar> head) {
        while (static_cast<int>(head.size()) < n) head.push_back(Scalar());
        return Distribution::validated(std::move(head));
    };
    Scalar one = Scalar::of_int(1);
    Scalar half_r2 = Scalar::sqrt2() * Scalar::of_rational(1, 2);
    Scalar third_r3 = Scalar::sqrt3() * Scalar::of_rational(1, 3);
    Scalar quarter_r2 = Scalar::sqrt2() * Scalar::of_rational(1, 4);
    Scalar sixth_r6 = Scalar::sqrt6() * Scalar::of_rational(1, 6);
    return {
        pad({half_r2, one - half_r2}),
        pad({third_r3, one - third_r3}),
        pad({quarter_r2, third_r3, one - quarter_r2 - third_r3}),
        pad({Scalar(), sixth_r6, one - sixth_r6}),
    };
}

} // namespace sumform
