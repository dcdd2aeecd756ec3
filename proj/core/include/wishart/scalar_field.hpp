#pragma once

#include <array>
#include <cstddef>

#include "wishart/errors.hpp"

namespace wishart {

// Number field of the matrix entries. The enum value is the Dyson index beta;
// a standard unit sample has E|Z|^2 = 1 and E|Z|^4 = 1 + 2/beta.
enum class ScalarField : int { Real = 1, Complex = 2, Quaternion = 4 };

constexpr int beta_of(ScalarField f) { return static_cast<int>(f); }

// Component count of one scalar: 1 (real), 2 (complex), 4 (quaternion 1,i,j,k).
constexpr int component_count(ScalarField f) { return static_cast<int>(f); }

inline ScalarField scalar_field_from_beta(int beta) {
    switch (beta) {
        case 1: return ScalarField::Real;
        case 2: return ScalarField::Complex;
        case 4: return ScalarField::Quaternion;
        default: throw ContractViolation("beta must be 1, 2 or 4");
    }
}

// One sampled scalar, stored as up to four real components (1, i, j, k).
// Unused components are zero. Each component carries variance 1/beta so that
// E|Z|^2 = 1.
struct FieldScalar {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    double norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]; }
};

// Scalar part of a * conj(b); for all three fields this is the component dot
// product, the quantity whose expectation is c1(s,t).
inline double scalar_part_conj_product(const FieldScalar& a, const FieldScalar& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2] + a.c[3] * b.c[3];
}

}  // namespace wishart
