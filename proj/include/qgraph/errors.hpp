#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qgraph {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph description: dangling references, bad lengths, invalid couplings.
class GraphError : public Error {
public:
  using Error::Error;
};

/// A matrix that has to be inverted at `k` is singular or too badly conditioned.
class PoleError : public Error {
public:
  enum class Kind { EffectiveCoupling, Sigma };

  PoleError(Kind kind, std::complex<double> k);

  Kind kind() const noexcept { return kind_; }
  std::complex<double> k() const noexcept { return k_; }

private:
  Kind kind_;
  std::complex<double> k_;
};

/// Too many cycles or pseudo-orbits for the configured cap.
class OrbitExplosion : public Error {
public:
  using Error::Error;
};

class RootFinderError : public Error {
public:
  using Error::Error;
};

class FermiError : public Error {
public:
  using Error::Error;
};

class FixtureError : public Error {
public:
  using Error::Error;
};

}  // namespace qgraph
