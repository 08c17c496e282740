#pragma once

// Exception types shared across the toolkit.  Designed stops of the design
// procedure (Schur failure, equilibrium outside the admissible box, ...) are
// reported through DesignReport::status instead; exceptions here signal
// malformed inputs or numerical breakdown.

#include <stdexcept>
#include <string>

namespace dse {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct NonFinite : Error {
  explicit NonFinite(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& what) : Error(what) {}
};

// Simplex gave up after the pivot cap; indicates cycling or a badly scaled
// problem.
struct CycleLimitExceeded : Error {
  explicit CycleLimitExceeded(const std::string& what) : Error(what) {}
};

// The generator list does not contain the origin in its convex hull, so gauge
// functions and containment factors are undefined for it.
struct NotACSet : Error {
  explicit NotACSet(const std::string& what) : Error(what) {}
};

struct NegativeScale : Error {
  explicit NegativeScale(const std::string& what) : Error(what) {}
};

struct NotObservable : Error {
  NotObservable(const std::string& what, int rank_found)
      : Error(what), rank(rank_found) {}
  int rank;
};

// Contractive-set synthesis found gamma* >= 1 for the requested horizon.
struct NotContractive : Error {
  NotContractive(const std::string& what, double gamma)
      : Error(what), gamma_star(gamma) {}
  double gamma_star;
};

// Equilibrium of the scaling-factor system is not strictly inside the
// admissible box, so the finitely determined invariant set cannot be built.
struct InteriorViolation : Error {
  explicit InteriorViolation(const std::string& what) : Error(what) {}
};

// Invariant-set recursion did not finitely determine within the cap.
struct KStarCapExceeded : Error {
  explicit KStarCapExceeded(const std::string& what) : Error(what) {}
};

struct HeterogeneousDims : Error {
  explicit HeterogeneousDims(const std::string& what) : Error(what) {}
};

struct ModelError : Error {
  explicit ModelError(const std::string& what) : Error(what) {}
};

struct InvalidIndex : Error {
  explicit InvalidIndex(const std::string& what) : Error(what) {}
};

struct NotABox : Error {
  explicit NotABox(const std::string& what) : Error(what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

struct NonPositiveParameter : Error {
  explicit NonPositiveParameter(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace dse
