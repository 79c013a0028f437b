#pragma once

#include <string>

#include "sumform/error.hpp"

namespace sumform {

// The sum-form functional equations this library evaluates. The string ids
// ("1.5", "1.10", ...) are the stable external names used in CLI flags and
// report files.
//
//   1.5   sum_ij f(p_i q_j) = sum_i f(p_i) + sum_j f(q_j)
//                             + lambda * sum_i f(p_i) * sum_j f(q_j)
//   1.7   sum_ij f_ij(p_i q_j) = sum_i h_i(p_i) + sum_j k_j(q_j)
//                             + lambda * sum_i h_i(p_i) * sum_j k_j(q_j)
//   1.8   like 1.5 with one h on the left and per-column k_j on the right
//   1.10  sum_ij f(p_i q_j) = sum_i f(p_i) * sum_j g_j(q_j)
//   1.11  sum_ij phi(p_i q_j) = sum_i phi(p_i) * sum_j phi(q_j)
//                             + m(n-1) * phi(0) * sum_i phi(p_i)
//   2.1   sum_i psi(p_i) = c            (single distribution, fixed constant)
//   2.3   sum_j psi_j(q_j) = 0          (single distribution, per-slot maps)
enum class EquationId { eq15, eq17, eq18, eq110, eq111, eq21, eq23 };

inline const char* to_string(EquationId id) {
    switch (id) {
    case EquationId::eq15: return "1.5";
    case EquationId::eq17: return "1.7";
    case EquationId::eq18: return "1.8";
    case EquationId::eq110: return "1.10";
    case EquationId::eq111: return "1.11";
    case EquationId::eq21: return "2.1";
    case EquationId::eq23: return "2.3";
    }
    return "?";
}

inline EquationId equation_from_string(const std::string& s) {
    if (s == "1.5") return EquationId::eq15;
    if (s == "1.7") return EquationId::eq17;
    if (s == "1.8") return EquationId::eq18;
    if (s == "1.10") return EquationId::eq110;
    if (s == "1.11") return EquationId::eq111;
    if (s == "2.1") return EquationId::eq21;
    if (s == "2.3") return EquationId::eq23;
    fail("unknown-equation", "unknown equation id \"" + s + "\"");
}

// True for the equations quantified over a single distribution.
inline bool single_distribution(EquationId id) {
    return id == EquationId::eq21 || id == EquationId::eq23;
}

inline bool needs_lambda(EquationId id) {
    return id == EquationId::eq15 || id == EquationId::eq17 || id == EquationId::eq18;
}

} // namespace sumform
