#ifndef MOTIVIC_LINALG_HPP
#define MOTIVIC_LINALG_HPP

#include <optional>
#include <vector>

#include "motivic/rational.hpp"

namespace motivic {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;  // row-major

QVec qvec(size_t n, const Rat& v = Rat(0));
QMat qmat(size_t r, size_t c, const Rat& v = Rat(0));
QMat identity(size_t n);

Rat dot(const QVec& a, const QVec& b);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const QVec& a, const Rat& s);
bool is_zero(const QVec& a);

QMat transpose(const QMat& m);
QMat matmul(const QMat& a, const QMat& b);
QVec matvec(const QMat& a, const QVec& x);

size_t rank(QMat m);
Rat det(QMat m);

// Reduced row echelon form in place; returns pivot column indices.
std::vector<size_t> rref(QMat& m);

// Basis of the nullspace of m (as rows).
QMat nullspace(const QMat& m);

// Solves m x = b; empty optional when inconsistent. For underdetermined
// systems an arbitrary particular solution is returned.
std::optional<QVec> solve(const QMat& m, const QVec& b);

// Scales a rational vector to coprime integers, keeping orientation.
QVec primitive(const QVec& v);

// Lattice-normalized volume factor of the parallelepiped spanned by the
// columns of `cols` relative to the saturated lattice Z^n intersect span.
// Equals |det| for a square matrix. Columns must be linearly independent.
Rat lattice_norm(const std::vector<QVec>& cols);

}  // namespace motivic

#endif
