#include "orbitlift/errors.hpp"

#include <sstream>

namespace orbitlift {

namespace {

std::string rank_drift_message(double t1, int r1, double t2, int r2) {
  std::ostringstream os;
  os.precision(17);
  os << "RankDrift: rank " << r1 << " at t=" << t1 << " but rank " << r2
     << " at t=" << t2;
  return os.str();
}

std::string residual_message(const char* what, double t, double residual) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t << " (residual " << residual << ")";
  return os.str();
}

}  // namespace

RankDrift::RankDrift(double t1_, int r1_, double t2_, int r2_)
    : StructuralError(rank_drift_message(t1_, r1_, t2_, r2_)),
      t1(t1_), t2(t2_), r1(r1_), r2(r2_) {}

NotTangent::NotTangent(double t_, double residual_)
    : StructuralError(residual_message("NotTangent", t_, residual_)),
      t(t_), residual(residual_) {}

ResidualBlowup::ResidualBlowup(double t_, double residual_)
    : StructuralError(residual_message("ResidualBlowup", t_, residual_)),
      t(t_), residual(residual_) {}

}  // namespace orbitlift
