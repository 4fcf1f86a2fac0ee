#pragma once

#include "uk/linalg.hpp"

namespace uk {

template <typename Real = double>
Matrix<Real> pauli_x() {
  Matrix<Real> m(2, 2);
  m << Real(0), Real(1), Real(1), Real(0);
  return m;
}

template <typename Real = double>
Matrix<Real> pauli_y() {
  const Complex<Real> i(0, 1);
  Matrix<Real> m(2, 2);
  m << Real(0), -i, i, Real(0);
  return m;
}

template <typename Real = double>
Matrix<Real> pauli_z() {
  Matrix<Real> m(2, 2);
  m << Real(1), Real(0), Real(0), Real(-1);
  return m;
}

template <typename Real = double>
Hermitian<Real> sigma_x() { return Hermitian<Real>(pauli_x<Real>()); }
template <typename Real = double>
Hermitian<Real> sigma_y() { return Hermitian<Real>(pauli_y<Real>()); }
template <typename Real = double>
Hermitian<Real> sigma_z() { return Hermitian<Real>(pauli_z<Real>()); }

template <typename Real = double>
State<Real> up_z() { return State<Real>::basis(2, 0); }
template <typename Real = double>
State<Real> down_z() { return State<Real>::basis(2, 1); }

}  // namespace uk
