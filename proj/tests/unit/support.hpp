#pragma once

#include <doctest.h>

#include <cmath>
#include <complex>

#include "urel/core.hpp"
#include "urel/measurement.hpp"
#include "urel/oracle.hpp"

namespace fixtures {

using namespace urel;

inline CMatrix ket_projector(const Eigen::VectorXcd& v)
{
    return v * v.adjoint() / v.squaredNorm();
}

/// (I + x X + y Y + z Z) / 2
inline DensityState bloch(double x, double y, double z)
{
    return DensityState(CMatrix((pauli::identity() + x * pauli::x() + y * pauli::y() + z * pauli::z()) / 2.0));
}

inline DensityState maximally_mixed(int d = 2)
{
    return DensityState(CMatrix(CMatrix::Identity(d, d) / double(d)));
}

inline HermObservable sx() { return HermObservable(pauli::x()); }
inline HermObservable sy() { return HermObservable(pauli::y()); }
inline HermObservable sz() { return HermObservable(pauli::z()); }

inline Povm sz_projective() { return projective_measurement_of(sz()); }

/// Effects (I +- eta Z)/2 with values +-1.
inline Povm noisy_z(double eta) { return unsharp_binary(pauli::z(), eta); }

inline oracle::RandomSpec spec_for(std::uint64_t seed, int i)
{
    oracle::RandomSpec s;
    s.seed = oracle::derive_seed(seed, static_cast<std::uint64_t>(i));
    s.dim = 2 + i % 4;
    s.n_outcomes = 1 + (i / 4) % 8;
    return s;
}

} // namespace fixtures
