#include "qgraph/linalg.hpp"

#include <cmath>
#include <sstream>

namespace qgraph {

namespace {

std::string pole_message(PoleError::Kind kind, std::complex<double> k) {
  std::ostringstream os;
  os << (kind == PoleError::Kind::EffectiveCoupling ? "effective-coupling pole" : "sigma pole")
     << " at k=(" << k.real() << "," << k.imag() << ")";
  return os.str();
}

}  // namespace

PoleError::PoleError(Kind kind, std::complex<double> k)
    : Error(pole_message(kind, k)), kind_(kind), k_(k) {}

CMatrix guarded_solve(const CMatrix& a, const CMatrix& b, PoleError::Kind kind, Complex k) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  const double rc = lu.rcond();
  if (!(rc >= kMinRcond)) throw PoleError(kind, k);
  return lu.solve(b);
}

CMatrix ones(Eigen::Index d) { return CMatrix::Constant(d, d, Complex(1.0, 0.0)); }

double unitarity_defect(const CMatrix& u) {
  const CMatrix r = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return r.cwiseAbs().maxCoeff();
}

}  // namespace qgraph
