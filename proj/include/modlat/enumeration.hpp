#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "modlat/errors.hpp"
#include "modlat/lattice.hpp"
#include "modlat/qseries.hpp"

namespace modlat {

/// Fincke-Pohst q-table: diagonal q(i,i) = D_i, and q(i,j) for j > i such that
/// x G x^T = sum_i q(i,i) (x_i + sum_{j>i} q(i,j) x_j)^2. Exact.
struct CholeskyData {
  RatMatrix q;
};

CholeskyData exact_cholesky(const Lattice& lattice);
CholeskyData exact_cholesky(const RatMatrix& gram);
RatMatrix reconstruct_gram(const CholeskyData& c);

using CoordRow = std::vector<std::int64_t>;

struct VectorLayer {
  Rat norm;
  std::vector<CoordRow> vectors;
  bool complete = true;
};

struct ThetaCounts {
  Rat bound;
  std::map<Rat, std::uint64_t> counts;

  std::uint64_t operator[](const Rat& norm) const {
    auto it = counts.find(norm);
    return it == counts.end() ? 0 : it->second;
  }
  bool operator==(const ThetaCounts&) const = default;
};

struct EnumerationResult {
  ThetaCounts theta;
  std::vector<VectorLayer> layers;  // only when collecting, ascending norm
};

class CapacityError : public Error {
 public:
  CapacityError(const std::string& message, ThetaCounts partial)
      : Error(ErrorKind::Capacity, message), partial_(std::move(partial)) {}
  const ThetaCounts& partial() const noexcept { return partial_; }

 private:
  ThetaCounts partial_;
};

struct EnumerationOptions {
  unsigned threads = 0;  // 0: default_thread_count()
  bool lll = true;
  std::size_t collect_limit = 10'000'000;
};

/// MODLAT_THREADS if set, else hardware concurrency (at least 1).
unsigned default_thread_count();

/// Runs fn(0..count-1) on up to `threads` workers (dynamic scheduling).
void parallel_for_tasks(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Enumerates all integer rows z with (z + f) G' (z + f)^T <= bound, where G'
/// is the (optionally LLL-reduced) Gram matrix and f the fractional part of
/// the shift in reduced coordinates. The search tree uses a floating q-table
/// with a safety margin; every leaf is decided by an exact integer norm.
///
/// Work is split over the values of the outermost coordinate. A task visits
/// its vectors in a fixed order, so merging task results in task order is
/// deterministic for any thread count.
class ShortVectorEnumerator {
 public:
  /// Visitor receives reduced coordinates and the scaled integer norm
  /// (true norm = scaled / scale()).
  using Visitor = std::function<void(std::span<const std::int64_t>, __int128)>;

  ShortVectorEnumerator(const RatMatrix& gram, const Rat& bound, const std::optional<std::vector<Rat>>& shift,
                        bool use_lll);

  std::size_t dim() const noexcept { return n_; }
  std::size_t task_count() const noexcept { return tasks_; }
  const Int& scale() const noexcept { return scale_; }
  const Rat& bound() const noexcept { return bound_; }
  Rat norm_of(__int128 scaled) const;

  void run_task(std::size_t task, const Visitor& visit) const;

  /// Coordinates w.r.t. the input basis for a visited row.
  void to_input(std::span<const std::int64_t> z, std::span<std::int64_t> x) const;

  /// For a linear form x -> x . v on input coordinates, returns (w, c) with
  /// x . v = z . w - c for visited rows z.
  std::pair<std::vector<Rat>, Rat> reduced_form(const std::vector<Rat>& v) const;

  const IntMatrix& transform() const noexcept { return transform_; }
  const RatMatrix& reduced_gram() const noexcept { return reduced_; }

 private:
  std::size_t n_ = 0;
  Rat bound_;
  Int scale_;
  __int128 bound_scaled_ = 0;
  std::size_t tasks_ = 0;
  std::int64_t outer_lo_ = 0;
  // reduced basis data
  IntMatrix transform_;
  RatMatrix reduced_;
  std::vector<std::int64_t> offset_;  // z = x' + offset
  std::vector<std::int64_t> shift_num_;
  std::int64_t shift_den_ = 1;
  std::vector<double> frac_;
  std::vector<std::int64_t> gi_;  // scaled reduced Gram, row-major
  std::vector<double> qdiag_;
  std::vector<double> qoff_;  // row-major, j > i
  std::vector<std::int64_t> tmat_;
  double bound_float_ = 0.0;
};

EnumerationResult enumerate(const RatMatrix& gram, const Rat& bound, const std::optional<std::vector<Rat>>& shift,
                            bool collect, const EnumerationOptions& options = {});
EnumerationResult enumerate(const Lattice& lattice, const Rat& bound,
                            const std::optional<std::vector<Rat>>& shift = std::nullopt, bool collect = false,
                            const EnumerationOptions& options = {});

struct MinimumResult {
  Rat min;
  std::uint64_t count = 0;
};
MinimumResult minimum(const Lattice& lattice, const EnumerationOptions& options = {});
/// Min(L) as coordinate rows.
VectorLayer minimal_vectors(const Lattice& lattice, const EnumerationOptions& options = {});

/// Minimum norm of a shifted coset s + L (s not in L).
MinimumResult coset_minimum(const Lattice& lattice, const std::vector<Rat>& shift,
                            const EnumerationOptions& options = {});

/// Series in units of q^(1/den) from counts that are complete below
/// `next_unknown`, the smallest norm that may still occur.
QSeries counts_to_series(const ThetaCounts& counts, QSeries::Exponent den, const Rat& next_unknown);

/// theta_L with coefficients a_L(j) for j < precision_in_q (integral L).
QSeries theta_series(const Lattice& lattice, QSeries::Exponent precision_in_q, const EnumerationOptions& options = {});

/// All norms <= bound; precision extends to the next norm that can occur.
/// For non-integral Gram matrices the unit is q^(1/(12 D)), D the common
/// denominator of the Gram matrix.
QSeries theta_window(const Lattice& lattice, const Rat& bound, const EnumerationOptions& options = {});

}  // namespace modlat
