#pragma once

// Fiber operators H(k) = Delta(k) + Q of a periodic graph and the band
// structure they generate over the quasimomentum torus (-pi, pi]^d.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgraph/graph.hpp"
#include "pgraph/hermitian_eig.hpp"
#include "pgraph/nelder_mead.hpp"
#include "pgraph/parallel.hpp"

namespace pgraph {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kFlatTolerance = 1e-8;
inline constexpr double kClusterTolerance = 1e-6;
inline constexpr double kDedupRadius = 1e-4;
inline constexpr double kMergeGap = 1e-12;
inline constexpr std::size_t kMaxRefinementSeeds = 256;
inline constexpr double kMaxAdaptedGridPoints = 2.0e6;

// Representative of x modulo 2*pi in (-pi, pi].
inline double wrap_angle(double x) {
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Distance from x to the lattice 2*pi*Z.
inline double distance_to_2pi_lattice(double x) { return std::abs(std::remainder(x, kTwoPi)); }

class QuasiMomentum {
 public:
  QuasiMomentum() = default;
  explicit QuasiMomentum(std::vector<double> components) : k_(std::move(components)) {}
  QuasiMomentum(std::initializer_list<double> components) : k_(components) {}

  static QuasiMomentum zero(std::size_t d) { return QuasiMomentum(std::vector<double>(d, 0.0)); }

  std::size_t size() const { return k_.size(); }
  double operator[](std::size_t i) const { return k_[i]; }
  double& operator[](std::size_t i) { return k_[i]; }
  const std::vector<double>& components() const { return k_; }

  QuasiMomentum canonical() const {
    QuasiMomentum out(*this);
    for (auto& x : out.k_) x = wrap_angle(x);
    return out;
  }

  QuasiMomentum operator-() const {
    QuasiMomentum out(*this);
    for (auto& x : out.k_) x = -x;
    return out;
  }

  // Picks one of k, -k (canonicalised) so that a +-k pair has a single
  // representative: the lexicographically larger one.
  QuasiMomentum even_representative() const {
    const auto a = canonical(), b = (-*this).canonical();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i] - b[i]) > 1e-12) return a[i] > b[i] ? a : b;
    }
    return a;
  }

  friend bool operator==(const QuasiMomentum&, const QuasiMomentum&) = default;

 private:
  std::vector<double> k_;
};

inline double torus_distance(const QuasiMomentum& a, const QuasiMomentum& b) {
  if (a.size() != b.size()) throw std::invalid_argument("quasimomentum dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = wrap_angle(a[i] - b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

// Distance on the torus modulo the evenness symmetry k -> -k.
inline double even_torus_distance(const QuasiMomentum& a, const QuasiMomentum& b) {
  return std::min(torus_distance(a, b), torus_distance(a, -b));
}

inline std::ostream& operator<<(std::ostream& os, const QuasiMomentum& k) {
  os << '(';
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? ", " : "") << k[i];
  return os << ')';
}

enum class EdgeKind { lower, upper };

inline const char* to_string(EdgeKind kind) { return kind == EdgeKind::lower ? "min" : "max"; }

struct GridSpec {
  int points = 0;                   // per dimension; 0 selects the dimension default
  double refine_tolerance = 1e-10;  // Nelder-Mead value tolerance
  int max_iterations = 500;         // Nelder-Mead iterations per run
  unsigned threads = 0;             // 0 = available parallelism
  bool adapt_to_indices = true;     // raise N where large edge indices oscillate fast

  void validate() const {
    if (points != 0 && points < 8) throw std::invalid_argument("grid needs at least 8 points per dimension");
    if (!(refine_tolerance > 0.0)) throw std::invalid_argument("refinement tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("max refinement iterations must be positive");
  }
};

inline int default_grid_points(int dimension) {
  if (dimension <= 2) return 48;
  if (dimension == 3) return 24;
  return 12;
}

// H(k) for a graph; entry (v,u) = delta_vu (deg_v + Q_v) - sum over oriented
// edges (v,u) of exp(i <tau, k>). k is reduced mod 2*pi first.
inline HermitianMatrix assemble_fiber(const FundamentalGraph& g, const QuasiMomentum& k) {
  if (k.size() != static_cast<std::size_t>(g.dimension()))
    throw std::invalid_argument("quasimomentum has dimension " + std::to_string(k.size()) + ", graph has " +
                                std::to_string(g.dimension()));
  const auto kc = k.canonical();
  const std::size_t nu = g.vertex_count();
  HermitianMatrix h(nu);
  for (std::size_t v = 0; v < nu; ++v) h(v, v) = g.vertices()[v].potential + static_cast<double>(g.degree(v));
  for (const auto& e : g.edges()) {
    double phase = 0.0;
    for (std::size_t s = 0; s < kc.size(); ++s) phase += e.index[s] * kc[s];
    if (e.is_loop()) {
      h(e.from, e.from) -= 2.0 * std::cos(phase);
    } else {
      const Complex z = std::polar(1.0, phase);
      h(e.from, e.to) -= z;
      h(e.to, e.from) -= std::conj(z);
    }
  }
  return h;
}

inline std::vector<double> band_functions(const FundamentalGraph& g, const QuasiMomentum& k) {
  return eigenvalues(assemble_fiber(g, k));
}

inline double band_function(const FundamentalGraph& g, std::size_t band, const QuasiMomentum& k) {
  return band_functions(g, k).at(band - 1);
}

inline std::vector<double> periodic_spectrum(const FundamentalGraph& g) {
  return band_functions(g, QuasiMomentum::zero(static_cast<std::size_t>(g.dimension())));
}

// Regular grid on the torus: coordinate m in [0, N) maps to -pi + 2*pi*(m+1)/N,
// so 0 and pi are grid points for even N. Flat indices are lexicographic with
// the first coordinate varying slowest.
class TorusGrid {
 public:
  TorusGrid() = default;
  explicit TorusGrid(std::vector<int> counts) : counts_(std::move(counts)) {
    total_ = 1;
    for (int n : counts_) {
      if (n < 1) throw std::invalid_argument("grid counts must be positive");
      total_ *= static_cast<std::size_t>(n);
    }
  }

  std::size_t dimension() const { return counts_.size(); }
  std::size_t size() const { return total_; }
  const std::vector<int>& counts() const { return counts_; }

  double coordinate(std::size_t axis, int m) const {
    return -kPi + kTwoPi * static_cast<double>(m + 1) / static_cast<double>(counts_[axis]);
  }
  double spacing(std::size_t axis) const { return kTwoPi / counts_[axis]; }

  double cell_diameter() const {
    double s = 0.0;
    for (std::size_t a = 0; a < counts_.size(); ++a) s += spacing(a) * spacing(a);
    return std::sqrt(s);
  }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> m(counts_.size());
    for (std::size_t a = counts_.size(); a-- > 0;) {
      m[a] = static_cast<int>(flat % static_cast<std::size_t>(counts_[a]));
      flat /= static_cast<std::size_t>(counts_[a]);
    }
    return m;
  }

  std::size_t flat_index(const std::vector<int>& m) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < counts_.size(); ++a) flat = flat * static_cast<std::size_t>(counts_[a]) + static_cast<std::size_t>(m[a]);
    return flat;
  }

  QuasiMomentum point(std::size_t flat) const {
    const auto m = multi_index(flat);
    std::vector<double> k(m.size());
    for (std::size_t a = 0; a < m.size(); ++a) k[a] = coordinate(a, m[a]);
    return QuasiMomentum(std::move(k));
  }

  // Periodic neighbour along one axis.
  std::size_t neighbor(std::size_t flat, std::size_t axis, int step) const {
    auto m = multi_index(flat);
    const int n = counts_[axis];
    m[axis] = ((m[axis] + step) % n + n) % n;
    return flat_index(m);
  }

 private:
  std::vector<int> counts_;
  std::size_t total_ = 0;
};

// Points per axis used for band-edge searches. With adaptation, axis s gets
// at least 12 points per unit of the largest |tau_s|, rounded up to a
// multiple of 12 so that 0, +-pi/2, +-2pi/3 and pi stay on the grid.
inline TorusGrid search_grid(const FundamentalGraph& g, const GridSpec& spec) {
  spec.validate();
  const int base = spec.points > 0 ? spec.points : default_grid_points(g.dimension());
  std::vector<int> counts(static_cast<std::size_t>(g.dimension()), base);
  if (spec.adapt_to_indices) {
    const auto band = g.index_bandwidth();
    for (std::size_t s = 0; s < counts.size(); ++s) {
      const int needed = 12 * band[s];
      if (needed > counts[s]) counts[s] = (needed + 11) / 12 * 12;
    }
    // Keep the adapted grid affordable; axes never drop below the base count.
    for (;;) {
      double total = 1.0;
      std::size_t widest = 0;
      for (std::size_t s = 0; s < counts.size(); ++s) {
        total *= counts[s];
        if (counts[s] > counts[widest]) widest = s;
      }
      if (total <= kMaxAdaptedGridPoints || counts[widest] - 12 < base) break;
      counts[widest] -= 12;
    }
  }
  return TorusGrid(std::move(counts));
}

// All band functions sampled on a grid; values[p * bands + j].
struct BandSamples {
  TorusGrid grid;
  std::size_t bands = 0;
  std::vector<double> values;

  double at(std::size_t point, std::size_t band0) const { return values[point * bands + band0]; }
};

inline BandSamples sample_bands(const FundamentalGraph& g, const TorusGrid& grid, unsigned threads) {
  BandSamples s;
  s.grid = grid;
  s.bands = g.vertex_count();
  s.values.resize(grid.size() * s.bands);
  parallel_for(grid.size(), threads, [&](std::size_t p) {
    const auto lam = band_functions(g, grid.point(p));
    std::copy(lam.begin(), lam.end(), s.values.begin() + static_cast<std::ptrdiff_t>(p * s.bands));
  });
  return s;
}

struct BandEdge {
  double value = 0.0;
  std::vector<QuasiMomentum> extremizers;  // one representative per +-k pair
  std::size_t refined_candidates = 0;      // distinct refined optima before thresholding
  bool coarse_grid = false;
};

struct BandEdges {
  std::size_t band = 0;  // 1-based
  BandEdge lower;
  BandEdge upper;
  bool flat = false;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct BandStructure {
  std::size_t band_count = 0;
  std::vector<BandEdges> bands;
  std::vector<Interval> spectrum;  // merged, ascending, disjoint

  bool coarse_grid() const {
    for (const auto& b : bands)
      if (b.lower.coarse_grid || b.upper.coarse_grid) return true;
    return false;
  }
};

namespace detail {

struct RefinedPoint {
  QuasiMomentum k;
  double value;  // in minimisation sign convention
  double drift;  // distance from the seed grid point
};

inline void add_distinct(std::vector<QuasiMomentum>& out, const QuasiMomentum& k) {
  for (const auto& q : out)
    if (even_torus_distance(q, k) < kDedupRadius) return;
  out.push_back(k.even_representative());
}

// Global min (lower) or max (upper) of band `band0` over the torus: grid scan,
// then Nelder-Mead from every discrete local optimum whose grid value is
// within a curvature-based margin of the grid optimum.
inline BandEdge locate_extremum(const FundamentalGraph& g, const BandSamples& samples, std::size_t band0,
                                EdgeKind kind, const GridSpec& spec) {
  const auto& grid = samples.grid;
  const double sign = kind == EdgeKind::lower ? 1.0 : -1.0;
  const std::size_t npts = grid.size(), dim = grid.dimension();
  auto f_grid = [&](std::size_t p) { return sign * samples.at(p, band0); };

  double fmin = f_grid(0);
  for (std::size_t p = 1; p < npts; ++p) fmin = std::min(fmin, f_grid(p));

  double max_second = 0.0;
  for (std::size_t p = 0; p < npts; ++p) {
    for (std::size_t a = 0; a < dim; ++a) {
      const double lo = f_grid(grid.neighbor(p, a, -1)), hi = f_grid(grid.neighbor(p, a, +1));
      max_second = std::max(max_second, std::abs(hi - 2.0 * f_grid(p) + lo));
    }
  }
  const double margin = kClusterTolerance + static_cast<double>(dim) * max_second / 2.0;

  std::vector<std::size_t> seeds;
  for (std::size_t p = 0; p < npts; ++p) {
    const double fp = f_grid(p);
    if (fp > fmin + margin) continue;
    bool local = true;
    for (std::size_t a = 0; a < dim && local; ++a)
      local = fp <= f_grid(grid.neighbor(p, a, -1)) && fp <= f_grid(grid.neighbor(p, a, +1));
    if (local) seeds.push_back(p);
  }
  std::stable_sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) { return f_grid(a) < f_grid(b); });
  if (seeds.size() > kMaxRefinementSeeds) seeds.resize(kMaxRefinementSeeds);

  double min_spacing = grid.spacing(0);
  for (std::size_t a = 1; a < dim; ++a) min_spacing = std::min(min_spacing, grid.spacing(a));
  NelderMeadOptions nm;
  nm.f_tolerance = spec.refine_tolerance;
  nm.max_iterations = spec.max_iterations;
  nm.initial_step = 0.5 * min_spacing;

  std::vector<RefinedPoint> refined(seeds.size());
  parallel_for(seeds.size(), spec.threads, [&](std::size_t i) {
    const auto seed = grid.point(seeds[i]);
    auto objective = [&](const std::vector<double>& x) {
      return sign * band_functions(g, QuasiMomentum(x))[band0];
    };
    auto r = nelder_mead(objective, seed.components(), nm);
    QuasiMomentum k(r.x);
    refined[i] = {k.canonical(), r.value, torus_distance(k, seed)};
  });

  BandEdge edge;
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < refined.size(); ++i)
    if (refined[i].value < refined[best_i].value) best_i = i;
  const double best = std::min(fmin, refined[best_i].value);
  edge.value = sign * best;
  edge.coarse_grid = !refined.empty() && refined[best_i].drift > grid.cell_diameter();

  std::vector<QuasiMomentum> all_distinct;
  for (const auto& r : refined) {
    add_distinct(all_distinct, r.k);
    if (r.value <= best + kClusterTolerance) add_distinct(edge.extremizers, r.k);
  }
  edge.refined_candidates = all_distinct.size();
  return edge;
}

inline std::vector<Interval> merge_intervals(std::vector<Interval> bands) {
  std::sort(bands.begin(), bands.end(), [](const Interval& a, const Interval& b) {
    return a.lower < b.lower || (a.lower == b.lower && a.upper < b.upper);
  });
  std::vector<Interval> out;
  for (const auto& b : bands) {
    if (!out.empty() && b.lower <= out.back().upper + kMergeGap)
      out.back().upper = std::max(out.back().upper, b.upper);
    else
      out.push_back(b);
  }
  return out;
}

inline void check_band(const FundamentalGraph& g, std::size_t band) {
  if (band < 1 || band > g.vertex_count())
    throw std::invalid_argument("band index " + std::to_string(band) + " outside 1.." +
                                std::to_string(g.vertex_count()));
}

inline BandEdges edges_from_samples(const FundamentalGraph& g, const BandSamples& samples, std::size_t band,
                                    const GridSpec& spec) {
  BandEdges be;
  be.band = band;
  be.lower = locate_extremum(g, samples, band - 1, EdgeKind::lower, spec);
  be.upper = locate_extremum(g, samples, band - 1, EdgeKind::upper, spec);
  if (be.upper.value < be.lower.value) be.upper.value = be.lower.value;
  be.flat = be.upper.value - be.lower.value <= kFlatTolerance;
  return be;
}

}  // namespace detail

inline BandEdges band_edges(const FundamentalGraph& g, std::size_t band, const GridSpec& spec = {}) {
  detail::check_band(g, band);
  const auto samples = sample_bands(g, search_grid(g, spec), spec.threads);
  return detail::edges_from_samples(g, samples, band, spec);
}

inline BandStructure spectrum(const FundamentalGraph& g, const GridSpec& spec = {}) {
  const auto samples = sample_bands(g, search_grid(g, spec), spec.threads);
  BandStructure bs;
  bs.band_count = g.vertex_count();
  std::vector<Interval> pieces;
  for (std::size_t j = 1; j <= bs.band_count; ++j) {
    bs.bands.push_back(detail::edges_from_samples(g, samples, j, spec));
    pieces.push_back({bs.bands.back().lower.value, bs.bands.back().upper.value});
  }
  bs.spectrum = detail::merge_intervals(std::move(pieces));
  return bs;
}

struct DispersionTable {
  std::size_t dimension = 0;
  std::size_t bands = 0;
  std::vector<std::vector<double>> rows;  // k_1..k_d, lambda_1..lambda_nu
};

// Band functions on the plain N^d grid (no index adaptation).
inline DispersionTable dispersion_table(const FundamentalGraph& g, const GridSpec& spec = {}) {
  spec.validate();
  const int n = spec.points > 0 ? spec.points : default_grid_points(g.dimension());
  TorusGrid grid(std::vector<int>(static_cast<std::size_t>(g.dimension()), n));
  const auto samples = sample_bands(g, grid, spec.threads);
  DispersionTable t;
  t.dimension = grid.dimension();
  t.bands = samples.bands;
  t.rows.reserve(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    auto row = grid.point(p).components();
    for (std::size_t j = 0; j < samples.bands; ++j) row.push_back(samples.at(p, j));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace pgraph
