#pragma once

// Perturbed graph G_t versus limit graph: restriction identity, level sets of
// band edges, the hyperplane criterion for equal band edges, and the
// Hessian-based asymptotics of band edges for large |t|.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgraph/floquet.hpp"
#include "pgraph/graph.hpp"
#include "pgraph/hermitian_eig.hpp"

namespace pgraph {

inline constexpr double kGapTolerance = 1e-6;
inline constexpr std::size_t kDegenerateThreshold = 12;
inline constexpr double kLevelTolerance = 1e-8;
inline constexpr double kCoincidenceTolerance = 1e-6;
inline constexpr double kHessianStep = 1e-3;
inline constexpr double kSingularHessian = 1e-4;

using RealMatrix = std::vector<std::vector<double>>;

// Raised when an extremum does not satisfy the hypotheses of the asymptotic
// formula. condition() is "A1" (non-degenerate single-band extremum) or "A2"
// (unique extremum up to evenness).
class AssumptionViolation : public std::domain_error {
 public:
  AssumptionViolation(std::string condition, const std::string& detail)
      : std::domain_error("Assumption " + condition + " violated: " + detail), condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

namespace detail {

inline void check_t(const IndexVector& t, std::size_t d) {
  if (t.size() != d)
    throw std::invalid_argument("t has length " + std::to_string(t.size()) + ", expected " + std::to_string(d));
}

inline double dot_t(const IndexVector& t, const QuasiMomentum& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * k[i];
  return s;
}

inline std::vector<double> symmetric_eigenvalues(const RealMatrix& a) {
  HermitianMatrix h(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) h(i, j) = 0.5 * (a[i][j] + a[j][i]);
  return eigenvalues(h);
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve_linear(RealMatrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (const auto& row : a)
    for (double x : row) scale = std::max(scale, std::abs(x));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) <= 1e-14 * std::max(scale, 1.0)) throw std::domain_error("singular Hessian");
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline bool is_zero_or_pi(double x) {
  const double c = wrap_angle(x);
  return std::abs(c) <= 1e-6 || std::abs(std::abs(c) - kPi) <= 1e-6;
}

}  // namespace detail

// rho_t(k) = (t . k' - k_{d+1}) / (2 pi) for k = (k', k_{d+1}).
inline double rho_t(const QuasiMomentum& k, const IndexVector& t) {
  if (k.size() != t.size() + 1)
    throw std::invalid_argument("rho_t needs a quasimomentum of dimension " + std::to_string(t.size() + 1));
  return (detail::dot_t(t, k) - k[t.size()]) / kTwoPi;
}

// x minus its nearest integer, with ties sent to (-1/2, 1/2].
inline double alpha(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("alpha of a non-finite value");
  return x - std::ceil(x - 0.5);
}

// Euclidean distance from k to the nearest hyperplane t . k' - k_{d+1} = 2 pi n.
inline double hyperplane_distance(const QuasiMomentum& k, const IndexVector& t) {
  detail::check_t(t, k.size() - 1);
  double norm2 = 1.0;
  for (int x : t) norm2 += static_cast<double>(x) * x;
  return distance_to_2pi_lattice(detail::dot_t(t, k) - k[t.size()]) / std::sqrt(norm2);
}

// max |H_{G_t}(k) - H_limit(k, t . k)| entrywise.
inline double restriction_check(const FundamentalGraph& g_t, const FundamentalGraph& g_limit, const IndexVector& t,
                                const QuasiMomentum& k) {
  if (g_limit.dimension() != g_t.dimension() + 1)
    throw std::invalid_argument("limit graph must have dimension one more than the perturbed graph");
  if (g_t.vertices() != g_limit.vertices())
    throw std::invalid_argument("perturbed and limit graphs have different vertex lists");
  detail::check_t(t, static_cast<std::size_t>(g_t.dimension()));
  auto lifted = k.components();
  lifted.push_back(detail::dot_t(t, k));
  const auto a = assemble_fiber(g_t, k);
  const auto b = assemble_fiber(g_limit, QuasiMomentum(std::move(lifted)));
  double dev = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) dev = std::max(dev, std::abs(a.entries()[i] - b.entries()[i]));
  return dev;
}

// Central finite-difference Hessian of lambda_j (1-based band).
inline RealMatrix band_hessian(const FundamentalGraph& g, std::size_t band, const QuasiMomentum& k,
                               double h = kHessianStep) {
  const std::size_t n = k.size();
  auto f = [&](const std::vector<double>& x) { return band_functions(g, QuasiMomentum(x)).at(band - 1); };
  const auto& k0 = k.components();
  const double f0 = f(k0);
  RealMatrix hess(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    auto p = k0, m = k0;
    p[a] += h;
    m[a] -= h;
    hess[a][a] = (f(p) - 2.0 * f0 + f(m)) / (h * h);
    for (std::size_t b = a + 1; b < n; ++b) {
      auto pp = k0, pm = k0, mp = k0, mm = k0;
      pp[a] += h, pp[b] += h;
      pm[a] += h, pm[b] -= h;
      mp[a] -= h, mp[b] += h;
      mm[a] -= h, mm[b] -= h;
      hess[a][b] = hess[b][a] = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  }
  return hess;
}

struct ExtremumReport {
  QuasiMomentum k_o;
  std::size_t band = 0;
  double value = 0.0;
  EdgeKind kind = EdgeKind::lower;
  RealMatrix hessian;
  bool isolated = false;        // -+Hess positive definite
  bool single_band = false;     // neighbouring bands separated by more than the gap tolerance
  bool degenerate_set = false;  // level set is not a finite set of points
  double gap = std::numeric_limits<double>::infinity();
  double min_curvature = 0.0;   // smallest eigenvalue of H = -+Hess

  bool satisfies_assumptions() const { return isolated && single_band && !degenerate_set; }
};

inline ExtremumReport hessian_at(const FundamentalGraph& g, std::size_t band, EdgeKind kind, const QuasiMomentum& k_o,
                                 double h = kHessianStep) {
  detail::check_band(g, band);
  ExtremumReport r;
  r.k_o = k_o;
  r.band = band;
  r.kind = kind;
  const auto lam = band_functions(g, k_o);
  r.value = lam[band - 1];
  if (band >= 2) r.gap = std::min(r.gap, r.value - lam[band - 2]);
  if (band < lam.size()) r.gap = std::min(r.gap, lam[band] - r.value);
  r.single_band = r.gap > kGapTolerance;
  r.hessian = band_hessian(g, band, k_o, h);
  const double sign = kind == EdgeKind::lower ? 1.0 : -1.0;
  RealMatrix hm = r.hessian;
  double scale = 1.0;
  for (auto& row : hm)
    for (auto& x : row) {
      x *= sign;
      scale = std::max(scale, std::abs(x));
    }
  r.min_curvature = detail::symmetric_eigenvalues(hm).front();
  r.isolated = r.min_curvature > kSingularHessian * scale;
  return r;
}

struct LevelSet {
  std::size_t band = 0;
  EdgeKind kind = EdgeKind::lower;
  double value = 0.0;
  std::vector<QuasiMomentum> points;  // one per +-k pair
  bool degenerate = false;
  bool coarse_grid = false;
};

namespace detail {

inline bool has_flat_direction(const FundamentalGraph& g, std::size_t band, const QuasiMomentum& k) {
  const auto hess = band_hessian(g, band, k);
  double scale = 1.0;
  for (const auto& row : hess)
    for (double x : row) scale = std::max(scale, std::abs(x));
  const auto ev = symmetric_eigenvalues(hess);
  double smallest = std::abs(ev.front());
  for (double x : ev) smallest = std::min(smallest, std::abs(x));
  return smallest <= kSingularHessian * scale;
}

inline LevelSet level_set_from_edge(const FundamentalGraph& g, std::size_t band, EdgeKind kind, const BandEdge& edge,
                                    bool flat) {
  LevelSet ls;
  ls.band = band;
  ls.kind = kind;
  ls.value = edge.value;
  ls.coarse_grid = edge.coarse_grid;
  for (const auto& k : edge.extremizers)
    if (std::abs(band_functions(g, k)[band - 1] - edge.value) <= kLevelTolerance) ls.points.push_back(k);
  // A flat band attains its edges on the whole torus.
  ls.degenerate = flat || ls.points.size() > kDegenerateThreshold;
  for (std::size_t i = 0; !ls.degenerate && i < ls.points.size(); ++i)
    ls.degenerate = has_flat_direction(g, band, ls.points[i]);
  return ls;
}

}  // namespace detail

inline LevelSet find_level_set(const FundamentalGraph& g_limit, std::size_t band, EdgeKind kind,
                               const GridSpec& spec = {}) {
  const auto be = band_edges(g_limit, band, spec);
  return detail::level_set_from_edge(g_limit, band, kind, kind == EdgeKind::lower ? be.lower : be.upper, be.flat);
}

struct Coincidence {
  bool holds = false;
  std::optional<QuasiMomentum> witness;
  double residual = std::numeric_limits<double>::infinity();  // dist(t . k' - k_{d+1}, 2 pi Z) at the best point
};

// True iff some level-set point lies on a hyperplane t . k' - k_{d+1} in 2 pi Z.
inline Coincidence check_edge_coincidence(const LevelSet& ls, const IndexVector& t,
                                          double tol = kCoincidenceTolerance) {
  Coincidence c;
  for (const auto& k : ls.points) {
    detail::check_t(t, k.size() - 1);
    const double r = distance_to_2pi_lattice(detail::dot_t(t, k) - k[t.size()]);
    if (r < c.residual) {
      c.residual = r;
      c.witness = k;
    }
  }
  c.holds = c.residual <= tol;
  if (!c.holds) c.witness.reset();
  return c;
}

struct EdgeComparison {
  std::size_t band = 0;
  EdgeKind kind = EdgeKind::lower;
  double limit_edge = 0.0;
  double direct_edge = 0.0;
  Coincidence coincidence;
  bool limit_degenerate = false;
};

struct IsospectralReport {
  IndexVector t;
  BandStructure direct;
  BandStructure limit;
  std::vector<EdgeComparison> edges;  // band-major, lower then upper
  bool isospectral = false;
  double max_edge_difference = 0.0;
};

// Per-edge verdicts for G_t against its limit graph. The limit level sets are
// augmented by the lifts (k', t . k') of G_t's own extremizers whenever those
// lie on the limit level set; this supplies witnesses on extended level sets
// where refined points would otherwise miss the hyperplanes.
inline IsospectralReport check_isospectral(const FundamentalGraph& g_t, const FundamentalGraph& g_limit,
                                           const IndexVector& t, const GridSpec& spec = {}) {
  if (g_limit.dimension() != g_t.dimension() + 1 || g_t.vertices() != g_limit.vertices())
    throw std::invalid_argument("graphs are not a perturbed/limit pair");
  detail::check_t(t, static_cast<std::size_t>(g_t.dimension()));
  IsospectralReport rep;
  rep.t = t;
  rep.direct = spectrum(g_t, spec);
  rep.limit = spectrum(g_limit, spec);
  rep.isospectral = true;
  for (std::size_t j = 1; j <= rep.limit.band_count; ++j) {
    const auto& lb = rep.limit.bands[j - 1];
    const auto& db = rep.direct.bands[j - 1];
    for (EdgeKind kind : {EdgeKind::lower, EdgeKind::upper}) {
      const bool lower = kind == EdgeKind::lower;
      auto ls = detail::level_set_from_edge(g_limit, j, kind, lower ? lb.lower : lb.upper, lb.flat);
      for (const auto& kd : (lower ? db.lower : db.upper).extremizers) {
        auto lifted = kd.components();
        lifted.push_back(detail::dot_t(t, kd));
        QuasiMomentum kl = QuasiMomentum(std::move(lifted)).canonical();
        if (std::abs(band_functions(g_limit, kl)[j - 1] - ls.value) <= kLevelTolerance) ls.points.push_back(kl);
      }
      EdgeComparison ec;
      ec.band = j;
      ec.kind = kind;
      ec.limit_edge = ls.value;
      ec.direct_edge = lower ? db.lower.value : db.upper.value;
      ec.coincidence = check_edge_coincidence(ls, t);
      ec.limit_degenerate = ls.degenerate;
      rep.max_edge_difference = std::max(rep.max_edge_difference, std::abs(ec.direct_edge - ec.limit_edge));
      rep.isospectral = rep.isospectral && ec.coincidence.holds;
      rep.edges.push_back(std::move(ec));
    }
  }
  return rep;
}

struct AsymptoticPrediction {
  IndexVector t;
  double limit_edge = 0.0;
  double predicted = 0.0;
  double correction = 0.0;  // predicted - limit_edge
  double alpha = 0.0;
  double rho = 0.0;
  std::vector<double> t_hat;
  double quadratic_form = 0.0;  // <t_hat, H^{-1} t_hat>
  int error_order = 3;
  QuasiMomentum k_o;
};

inline AsymptoticPrediction predict_edge(const IndexVector& t, const ExtremumReport& ex) {
  if (!ex.single_band)
    throw AssumptionViolation("A1", "band " + std::to_string(ex.band) + " touches a neighbouring band at the extremum");
  if (ex.degenerate_set)
    throw AssumptionViolation("A2", "the band edge is attained on a non-isolated set of quasimomenta");
  if (!ex.isolated) throw AssumptionViolation("A1", "the Hessian at the extremum is not definite");
  detail::check_t(t, ex.k_o.size() - 1);

  AsymptoticPrediction p;
  p.t = t;
  p.k_o = ex.k_o;
  p.limit_edge = ex.value;
  p.t_hat.assign(t.begin(), t.end());
  p.t_hat.push_back(-1.0);
  const double sign = ex.kind == EdgeKind::lower ? 1.0 : -1.0;
  RealMatrix hm = ex.hessian;
  for (auto& row : hm)
    for (auto& x : row) x *= sign;
  const auto y = detail::solve_linear(hm, p.t_hat);
  for (std::size_t i = 0; i < y.size(); ++i) p.quadratic_form += p.t_hat[i] * y[i];
  p.rho = rho_t(ex.k_o, t);
  p.alpha = alpha(p.rho);
  p.correction = sign * 2.0 * kPi * kPi * p.alpha * p.alpha / p.quadratic_form;
  p.predicted = p.limit_edge + p.correction;
  p.error_order = 4;
  for (std::size_t i = 0; i < ex.k_o.size(); ++i)
    if (!detail::is_zero_or_pi(ex.k_o[i])) p.error_order = 3;
  return p;
}

// Several isolated extrema: the smallest (lower edge) or largest (upper edge)
// of the single-extremum predictions.
inline AsymptoticPrediction predict_edge_multi(const IndexVector& t, const std::vector<ExtremumReport>& extrema) {
  if (extrema.empty()) throw std::invalid_argument("no extrema given");
  std::optional<AsymptoticPrediction> best;
  int order = 4;
  for (const auto& ex : extrema) {
    auto p = predict_edge(t, ex);
    order = std::min(order, p.error_order);
    const bool better = !best || (ex.kind == EdgeKind::lower ? p.predicted < best->predicted
                                                              : p.predicted > best->predicted);
    if (better) best = std::move(p);
  }
  best->error_order = order;
  return *best;
}

// Reports for every point of a level set; throws when the set is degenerate.
inline std::vector<ExtremumReport> extremum_reports(const FundamentalGraph& g_limit, const LevelSet& ls) {
  if (ls.degenerate)
    throw AssumptionViolation("A2", "the level set of band " + std::to_string(ls.band) + " " + to_string(ls.kind) +
                                        " is not a finite set of isolated points");
  std::vector<ExtremumReport> out;
  for (const auto& k : ls.points) out.push_back(hessian_at(g_limit, ls.band, ls.kind, k));
  return out;
}

struct ConvergenceRow {
  IndexVector t;
  double t_norm = 0.0;
  double direct = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
};

struct ConvergenceStudy {
  std::size_t band = 0;
  EdgeKind kind = EdgeKind::lower;
  double limit_edge = 0.0;
  int error_order = 3;
  std::vector<ConvergenceRow> rows;
  double slope = std::numeric_limits<double>::quiet_NaN();
};

// Least-squares slope of log(y) against log(x), skipping y <= 1e-14.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (y[i] <= 1e-14 || x[i] <= 0.0) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= n, my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

inline double index_norm(const IndexVector& t) {
  double s = 0.0;
  for (int x : t) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

// Direct band edges of G_t = g + (v1, v2, t) against the asymptotic formula,
// for each t in the sequence.
inline ConvergenceStudy convergence_study(const FundamentalGraph& g, const std::string& v1, const std::string& v2,
                                          std::size_t band, EdgeKind kind, const std::vector<IndexVector>& ts,
                                          const GridSpec& spec = {}) {
  if (ts.empty()) throw std::invalid_argument("empty t sequence");
  const auto g_limit = lift_to_limit(perturb(g, {v1, v2, IndexVector(static_cast<std::size_t>(g.dimension()), 0)}));
  const auto ls = find_level_set(g_limit, band, kind, spec);
  const auto reports = extremum_reports(g_limit, ls);

  ConvergenceStudy st;
  st.band = band;
  st.kind = kind;
  st.limit_edge = ls.value;
  st.error_order = 4;
  std::vector<double> xs, ys;
  for (const auto& t : ts) {
    const auto pred = predict_edge_multi(t, reports);
    const auto be = band_edges(perturb(g, {v1, v2, t}), band, spec);
    ConvergenceRow row;
    row.t = t;
    row.t_norm = index_norm(t);
    row.direct = kind == EdgeKind::lower ? be.lower.value : be.upper.value;
    row.predicted = pred.predicted;
    row.residual = std::abs(row.direct - row.predicted);
    st.error_order = std::min(st.error_order, pred.error_order);
    xs.push_back(row.t_norm);
    ys.push_back(row.residual);
    st.rows.push_back(std::move(row));
  }
  st.slope = loglog_slope(xs, ys);
  return st;
}

}  // namespace pgraph
