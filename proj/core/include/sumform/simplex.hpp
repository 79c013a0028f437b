#pragma once

#include <cstdint>
#include <vector>

#include "sumform/scalar.hpp"

namespace sumform {

// A complete probability distribution on the closed simplex: n >= 2
// components, each in [0,1], summing to exactly 1 (exact backend) or to
// within 1e-12 (float backend). Zero components are allowed; vertices and
// faces are first-class points.
class Distribution {
public:
    // Validating constructor. Throws "too-few-components",
    // "component-out-of-range", "sum-not-one", "backend-mismatch".
    static Distribution validated(std::vector<Scalar> components);

    int size() const { return static_cast<int>(components_.size()); }
    const Scalar& operator[](int i) const { return components_[static_cast<size_t>(i)]; }
    const std::vector<Scalar>& components() const { return components_; }
    Backend backend() const { return components_.front().backend(); }

    Distribution to_float() const;

    // One CSV row of scalar text forms: "1/2,1/2,0".
    std::string csv() const;
    static Distribution parse_csv(const std::string& row, Backend backend);

private:
    explicit Distribution(std::vector<Scalar> components)
        : components_(std::move(components)) {}
    std::vector<Scalar> components_;
};

struct ProductMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Scalar> entries; // row-major, entry(i,j) = p_i * q_j

    const Scalar& at(int i, int j) const {
        return entries[static_cast<size_t>(i) * static_cast<size_t>(cols) + static_cast<size_t>(j)];
    }
};

// All exact grid points (k_1/d, ..., k_n/d) with k_i >= 0 summing to d,
// emitted in lexicographically decreasing order of the composition vector:
// (d,0,...,0) first, (0,...,0,d) last. Count is C(d+n-1, n-1).
std::vector<Distribution> enumerate_grid(int n, int d);

// Deterministic rational sample with exactly zero_count zero components; the
// positive components are random numerators renormalized exactly.
// Throws "zero-count-too-large" when zero_count > n-1.
Distribution sample_random(int n, std::uint64_t seed, int zero_count);

// Entry (i,j) = p_i * q_j; entries sum to exactly 1.
ProductMatrix product_matrix(const Distribution& p, const Distribution& q);

// The fixed irrational-coordinate distributions appended to grid sweeps so
// that non-measurable additive directions are exercised. Requires n >= 3.
std::vector<Distribution> irrational_distributions(int n);

} // namespace sumform
