#pragma once

// Newton polytopes of spectra, support functions and their log-sum-exp
// smoothing, classical mixed volumes, and the mixed pseudo-volume obtained as
// the t -> infinity limit of smoothed Monge-Ampere integrals over the unit ball.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crofton/crofton.hpp"
#include "crofton/numerics.hpp"
#include "crofton/quadrature.hpp"
#include "crofton/section_space.hpp"
#include "crofton/zero_count.hpp"

namespace crofton {

inline constexpr double kHullSnap = 1e-12;

namespace detail {

/// Real embedding of spectrum points as columns: R^n when every point is real,
/// otherwise R^{2n} as (Re l_1, ..., Re l_n, Im l_1, ..., Im l_n).
inline Eigen::MatrixXd embed(std::span<const SpectrumPoint> pts, bool real) {
  const auto n = pts.front().size();
  Eigen::MatrixXd m(real ? n : 2 * n, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    m.col(c).head(n) = pts[i].real();
    if (!real) m.col(c).tail(n) = pts[i].imag();
  }
  return m;
}

inline double coordinate_scale(const Eigen::MatrixXd& pts) {
  return pts.size() == 0 ? 1.0 : std::max(1.0, pts.cwiseAbs().maxCoeff());
}

struct AffineFrame {
  Eigen::VectorXd origin;
  Eigen::MatrixXd basis;  // m x k, orthonormal columns
};

inline AffineFrame affine_frame(const Eigen::MatrixXd& pts) {
  AffineFrame f;
  f.origin = pts.col(0);
  if (pts.cols() == 1) {
    f.basis.resize(pts.rows(), 0);
    return f;
  }
  const Eigen::MatrixXd diffs = pts.rightCols(pts.cols() - 1).colwise() - f.origin;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = kHullSnap * coordinate_scale(pts) * std::sqrt(double(pts.cols()));
  Eigen::Index k = 0;
  while (k < sv.size() && sv[k] > cut) ++k;
  f.basis = svd.matrixU().leftCols(k);
  return f;
}

/// Rounds coordinates produced by a rotation to multiples of kHullSnap * scale,
/// so points that coincide or share a coordinate before rotating still do.
inline Eigen::MatrixXd snapped(Eigen::MatrixXd pts, double scale) {
  const double q = kHullSnap * scale;
  return (pts / q).array().round().matrix() * q;
}

inline double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

/// Andrew's monotone chain; returns hull vertex indices counter-clockwise with
/// collinear points dropped.
inline std::vector<int> hull2d(const Eigen::MatrixXd& pts) {
  const int n = static_cast<int>(pts.cols());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts(0, a) < pts(0, b) || (pts(0, a) == pts(0, b) && pts(1, a) < pts(1, b));
  });
  idx.erase(std::unique(idx.begin(), idx.end(), [&](int a, int b) { return pts.col(a) == pts.col(b); }), idx.end());
  if (idx.size() < 3) return idx;
  const double tol = kHullSnap * coordinate_scale(pts) * coordinate_scale(pts);
  std::vector<int> h(2 * idx.size());
  std::size_t k = 0;
  auto p = [&](int i) { return Eigen::Vector2d(pts(0, i), pts(1, i)); };
  for (int i : idx) {
    while (k >= 2 && cross2(p(h[k - 2]), p(h[k - 1]), p(i)) <= tol) --k;
    h[k++] = i;
  }
  for (std::size_t t = idx.size() - 1, lower = k + 1; t-- > 0;) {
    const int i = idx[t];
    while (k >= lower && cross2(p(h[k - 2]), p(h[k - 1]), p(i)) <= tol) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

inline double polygon_area(const Eigen::MatrixXd& pts, const std::vector<int>& hull) {
  double a = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const int p = hull[i], q = hull[(i + 1) % hull.size()];
    a += pts(0, p) * pts(1, q) - pts(0, q) * pts(1, p);
  }
  return 0.5 * std::abs(a);
}

struct Facet3 {
  Eigen::Vector3d normal;  // outward unit normal
  double offset = 0.0;
  std::vector<int> members;
};

/// Facets of the hull of full-dimensional points in R^3 by brute force over
/// point triples; adequate for the small polytopes handled here.
inline std::vector<Facet3> facets3d(const Eigen::MatrixXd& pts) {
  const int n = static_cast<int>(pts.cols());
  const double scale = coordinate_scale(pts);
  const double tol = kHullSnap * scale * 16.0;
  std::vector<Facet3> facets;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const Eigen::Vector3d a = pts.col(j) - pts.col(i), b = pts.col(k) - pts.col(i);
        Eigen::Vector3d nrm = a.cross(b);
        if (nrm.norm() <= kHullSnap * scale * scale) continue;
        nrm.normalize();
        double off = nrm.dot(pts.col(i));
        double lo = 0.0, hi = 0.0;
        for (int p = 0; p < n; ++p) {
          const double s = nrm.dot(pts.col(p)) - off;
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        if (hi > tol && lo < -tol) continue;
        if (hi > tol) {
          nrm = -nrm;
          off = -off;
        }
        const bool dup = std::any_of(facets.begin(), facets.end(), [&](const Facet3& f) {
          return f.normal.dot(nrm) > 1.0 - 1e-9 && std::abs(f.offset - off) <= tol;
        });
        if (dup) continue;
        Facet3 f{nrm, off, {}};
        for (int p = 0; p < n; ++p)
          if (std::abs(nrm.dot(pts.col(p)) - off) <= tol) f.members.push_back(p);
        facets.push_back(std::move(f));
      }
    }
  }
  return facets;
}

/// Coordinate projection of a facet's member points onto the plane that drops
/// the axis with the largest normal component. It is exact on integer input
/// and scales areas by |normal[dropped]|.
inline int facet_dropped_axis(const Facet3& f) {
  Eigen::Index axis = 0;
  f.normal.cwiseAbs().maxCoeff(&axis);
  return static_cast<int>(axis);
}

inline Eigen::MatrixXd facet_coordinates(const Eigen::MatrixXd& pts, const Facet3& f) {
  const int drop = facet_dropped_axis(f);
  const int a = drop == 0 ? 1 : 0, b = drop == 2 ? 1 : 2;
  Eigen::MatrixXd c(2, static_cast<Eigen::Index>(f.members.size()));
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    c(0, static_cast<Eigen::Index>(i)) = pts(a, f.members[i]);
    c(1, static_cast<Eigen::Index>(i)) = pts(b, f.members[i]);
  }
  return c;
}

/// Is p inside the simplex spanned by the columns of s (k x (k+1))?
inline bool in_simplex(const Eigen::VectorXd& p, const Eigen::MatrixXd& s, double tol) {
  const auto k = s.rows();
  Eigen::MatrixXd a(k, k);
  for (Eigen::Index c = 0; c < k; ++c) a.col(c) = s.col(c + 1) - s.col(0);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (lu.rank() < k) return false;
  const Eigen::VectorXd bary = lu.solve(p - s.col(0));
  return (bary.array() >= -tol).all() && bary.sum() <= 1.0 + tol;
}

/// Hull vertex indices of full-dimensional points in R^k, any k. Points are
/// dropped when they lie in a simplex of other points (Caratheodory).
inline std::vector<int> hull_vertices_by_simplices(const Eigen::MatrixXd& pts) {
  const int n = static_cast<int>(pts.cols());
  const int k = static_cast<int>(pts.rows());
  std::vector<int> keep;
  for (int p = 0; p < n; ++p) {
    bool duplicate = false;
    for (int q = 0; q < p; ++q) duplicate = duplicate || pts.col(q) == pts.col(p);
    if (duplicate) continue;
    std::vector<int> others;
    for (int q = 0; q < n; ++q)
      if (!(pts.col(q) == pts.col(p))) others.push_back(q);
    bool inside = false;
    const int m = static_cast<int>(others.size());
    if (m >= k + 1) {
      std::vector<bool> mask(static_cast<std::size_t>(m), false);
      std::fill(mask.begin(), mask.begin() + k + 1, true);
      do {
        Eigen::MatrixXd s(k, k + 1);
        int c = 0;
        for (int i = 0; i < m; ++i)
          if (mask[static_cast<std::size_t>(i)]) s.col(c++) = pts.col(others[static_cast<std::size_t>(i)]);
        inside = in_simplex(pts.col(p), s, 1e-10);
      } while (!inside && std::prev_permutation(mask.begin(), mask.end()));
    }
    if (!inside) keep.push_back(p);
  }
  return keep;
}

/// Indices of the extreme points of a finite set in any dimension.
inline std::vector<int> extreme_points(const Eigen::MatrixXd& pts) {
  const AffineFrame f = affine_frame(pts);
  const auto k = f.basis.cols();
  const Eigen::MatrixXd local = k == pts.rows() ? Eigen::MatrixXd(pts.colwise() - f.origin)
                                                : snapped(f.basis.transpose() * (pts.colwise() - f.origin),
                                                          coordinate_scale(pts));
  if (k == 0) return {0};
  if (k == 1) {
    Eigen::Index lo = 0, hi = 0;
    local.row(0).minCoeff(&lo);
    local.row(0).maxCoeff(&hi);
    return {static_cast<int>(std::min(lo, hi)), static_cast<int>(std::max(lo, hi))};
  }
  if (k == 2) return hull2d(local);
  if (k == 3) {
    std::vector<int> verts;
    for (const Facet3& facet : facets3d(local)) {
      const Eigen::MatrixXd c = facet_coordinates(local, facet);
      for (int i : hull2d(c)) verts.push_back(facet.members[static_cast<std::size_t>(i)]);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
  }
  return hull_vertices_by_simplices(local);
}

/// d-dimensional volume of the hull of points in R^d (d <= 3); 0 when the
/// points span a lower-dimensional affine subspace.
inline double hull_volume(const Eigen::MatrixXd& pts) {
  const auto d = pts.rows();
  if (d < 1 || d > 3) throw InputError("hull_volume: dimension must be 1, 2 or 3");
  const AffineFrame f = affine_frame(pts);
  if (f.basis.cols() < d) return 0.0;
  if (d == 1) return pts.row(0).maxCoeff() - pts.row(0).minCoeff();
  if (d == 2) return polygon_area(pts, hull2d(pts));
  const Eigen::Vector3d centroid = pts.rowwise().mean();
  double vol = 0.0;
  for (const Facet3& facet : facets3d(pts)) {
    const Eigen::MatrixXd c = facet_coordinates(pts, facet);
    const double area = polygon_area(c, hull2d(c)) / std::abs(facet.normal[facet_dropped_axis(facet)]);
    vol += area * (facet.offset - facet.normal.dot(centroid)) / 3.0;
  }
  return vol;
}

}  // namespace detail

/// Convex hull of a finite spectrum, stored as its (minimal) vertex set. The
/// hull lives in R^n when the spectrum is real and in R^{2n} otherwise.
class Polytope {
 public:
  static Polytope hull_of(std::vector<SpectrumPoint> pts) {
    if (pts.empty()) throw InputError("Polytope: empty point set");
    const auto n = pts.front().size();
    for (const auto& p : pts) {
      if (p.size() != n) throw InputError("Polytope: points have mixed dimensions");
      if (!p.allFinite()) throw InputError("Polytope: non-finite point");
    }
    Polytope poly;
    poly.n_ = static_cast<int>(n);
    poly.real_ = std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.imag().isZero(0.0); });
    if (2 * n > 4 && !poly.real_) throw InputError("Polytope: real dimension exceeds 4");
    if (n > 4) throw InputError("Polytope: real dimension exceeds 4");
    const Eigen::MatrixXd emb = detail::embed(pts, poly.real_);
    std::vector<int> idx = detail::extreme_points(emb);
    std::sort(idx.begin(), idx.end());
    for (int i : idx) poly.vertices_.push_back(pts[static_cast<std::size_t>(i)]);
    return poly;
  }

  /// Complex dimension n of the space the spectrum lives in.
  int dim() const { return n_; }
  bool is_real() const { return real_; }
  int real_dim() const { return real_ ? n_ : 2 * n_; }
  const std::vector<SpectrumPoint>& vertices() const { return vertices_; }
  Eigen::MatrixXd embedded_vertices() const { return detail::embed(vertices_, real_); }

  /// Dimension of the affine hull.
  int affine_dim() const { return static_cast<int>(detail::affine_frame(embedded_vertices()).basis.cols()); }

  /// Volume in R^n (real polytopes only, n <= 3).
  double volume() const {
    if (!real_) throw InputError("Polytope: volume needs a real polytope");
    return detail::hull_volume(embedded_vertices());
  }

  Polytope scaled(double s) const {
    std::vector<SpectrumPoint> v;
    for (const auto& p : vertices_) v.push_back(s * p);
    return hull_of(std::move(v));
  }

  Polytope translated(const SpectrumPoint& shift) const {
    std::vector<SpectrumPoint> v;
    for (const auto& p : vertices_) v.push_back(p + shift);
    return hull_of(std::move(v));
  }

  friend Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
    if (a.n_ != b.n_) throw InputError("minkowski_sum: dimension mismatch");
    std::vector<SpectrumPoint> sums;
    for (const auto& p : a.vertices_)
      for (const auto& q : b.vertices_) sums.push_back(p + q);
    return hull_of(std::move(sums));
  }

 private:
  int n_ = 0;
  bool real_ = true;
  std::vector<SpectrumPoint> vertices_;
};

/// conv(support) with interior and duplicate points dropped.
inline Polytope newton_polytope(const std::vector<SpectrumPoint>& support) {
  if (support.empty()) throw InputError("newton_polytope: support must be nonempty");
  return Polytope::hull_of(support);
}

inline Polytope newton_polytope(const SectionSpace& space) {
  if (space.kind() != SectionSpace::Kind::kExponentialSum) {
    throw InputError("newton_polytope: only exponential-sum spaces have a spectrum");
  }
  return newton_polytope(space.support());
}

namespace detail {
inline double pairing_real(const ComplexPoint& z, const SpectrumPoint& l) {
  return (z.coords().array() * l.array()).sum().real();
}
}  // namespace detail

/// h(z) = max over the spectrum of Re <z, lambda>.
inline double support_function(std::span<const SpectrumPoint> spectrum, const ComplexPoint& z) {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& l : spectrum) h = std::max(h, detail::pairing_real(z, l));
  return h;
}

inline double support_function(const Polytope& k, const ComplexPoint& z) { return support_function(k.vertices(), z); }

/// h_t(z) = (1/2t) log sum exp(2t Re <z, lambda>), evaluated as
/// h(z) + (1/2t) log sum exp(2t (Re <z, lambda> - h(z))). Satisfies
/// 0 <= h_t - h <= log(#spectrum) / (2t).
inline double smoothed_support(std::span<const SpectrumPoint> spectrum, double t, const ComplexPoint& z) {
  if (!(t > 0.0)) throw InputError("smoothed_support: t must be positive");
  const double h = support_function(spectrum, z);
  double sum = 0.0;
  for (const auto& l : spectrum) sum += std::exp(2.0 * t * (detail::pairing_real(z, l) - h));
  return h + std::log(sum) / (2.0 * t);
}

// ---------------------------------------------------------------------------

/// Mixed volume of n real polytopes in R^n (n <= 3), normalized so that
/// V(K, ..., K) = vol(K):
///   V = (1/n!) sum_{S nonempty} (-1)^{n-|S|} vol(sum_{i in S} K_i).
inline double mixed_volume(std::span<const Polytope> ks) {
  const auto n = ks.size();
  if (n < 1 || n > 3) throw InputError("mixed_volume: supports 1 <= n <= 3 polytopes");
  for (std::size_t i = 0; i < n; ++i) {
    if (!ks[i].is_real()) throw InputError("mixed_volume: polytope " + std::to_string(i) + " is not real");
    if (static_cast<std::size_t>(ks[i].dim()) != n) {
      throw InputError("mixed_volume: polytope " + std::to_string(i) + " lives in R^" + std::to_string(ks[i].dim()) +
                       ", expected R^" + std::to_string(n));
    }
  }
  double acc = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::optional<Polytope> sum;
    int size = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      sum = sum ? minkowski_sum(*sum, ks[i]) : ks[i];
      ++size;
    }
    acc += ((static_cast<int>(n) - size) % 2 == 0 ? 1.0 : -1.0) * sum->volume();
  }
  return acc / factorial(static_cast<int>(n));
}

inline double mixed_volume(std::initializer_list<Polytope> ks) {
  return mixed_volume(std::span<const Polytope>(ks.begin(), ks.size()));
}

// ---------------------------------------------------------------------------
// Mixed pseudo-volume

struct PseudoVolumeOptions {
  std::vector<double> t_grid{8.0, 16.0, 32.0};
  /// Quadrature over the unit ball; by default product-Gauss with resolution
  /// chosen from the dimension of the slice the integrand depends on.
  std::optional<QuadratureSpec> quadrature;
};

struct PseudoVolumeResult {
  double value = 0.0;
  double extrapolation_error = 0.0;
  std::vector<double> t_grid;
  std::vector<double> values;            // smoothed integral at each t
  std::vector<double> quadrature_errors;
  int slice_dim = 0;
  bool non_monotone = false;             // warning flag
};

/// Normalization of the pseudo-volume: with dd^c fixed so that a unit segment
/// in C^1 has V = 1, the ball integral of a real polytope tuple equals
/// (beta_n / 2^n) times its mixed volume, beta_n = vol(unit ball of R^n).
/// The factor 2^n / beta_n makes V agree with the mixed volume for real
/// polytopes in every dimension; it is 1 for n = 1.
inline double pseudo_volume_normalization(int n) { return std::pow(2.0, n) / unit_ball_volume(n); }

/// Prediction for lim M_{tB} / t^n given the pseudo-volume V:
/// (n! / pi^n) * (beta_n / 2^n) * V. Equals V / pi for n = 1.
inline double asymptotic_density_constant(int n) {
  return crofton_constant(n) / pseudo_volume_normalization(n);
}

namespace detail {

/// Orthonormal basis (R^{2n} interleaved coordinates) of the span of the
/// real functionals x -> Re <z, lambda - mu> over pairs in each spectrum.
inline Eigen::MatrixXd relevant_directions(std::span<const Polytope> ks) {
  const int n = ks.front().dim();
  std::vector<Eigen::VectorXd> rows;
  for (const auto& k : ks) {
    const auto& v = k.vertices();
    for (std::size_t a = 1; a < v.size(); ++a) {
      const SpectrumPoint d = v[a] - v[0];
      Eigen::VectorXd r(2 * n);
      for (int j = 0; j < n; ++j) {
        r[2 * j] = d[j].real();
        r[2 * j + 1] = -d[j].imag();
      }
      rows.push_back(r);
    }
  }
  if (rows.empty()) return Eigen::MatrixXd(2 * n, 0);
  Eigen::MatrixXd a(2 * n, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = rows[i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > 1e-10 * std::max(1.0, sv[0])) ++rank;
  return svd.matrixU().leftCols(rank);
}

inline QuadratureSpec default_slice_quadrature(int k) {
  return QuadratureSpec::product_gauss(k <= 2 ? 256 : k == 3 ? 96 : 40);
}

}  // namespace detail

/// Smoothed ball integral at a single t:
///   (2^n / beta_n) * integral_B t^n D(H_1(t w), ..., H_n(t w)) dw,
/// where H_i is the metric Hessian of the exponential-sum space spanned by the
/// vertices of K_i; equivalently 2^n D of the complex Hessians of the smoothed
/// support functions h_{i,t}. The integrand only depends on the projection of
/// w onto the span Q of the spectrum differences, so the ball integral is
/// reduced to a k-ball with weight beta_{2n-k} (1 - |p|^2)^{(2n-k)/2}.
inline QuadratureResult smoothed_pseudo_volume(std::span<const Polytope> ks, double t, const QuadratureSpec& q) {
  const auto n = static_cast<int>(ks.size());
  if (n < 1) throw InputError("mixed_pseudo_volume: need at least one polytope");
  for (int i = 0; i < n; ++i) {
    if (ks[static_cast<std::size_t>(i)].dim() != n) {
      throw InputError("mixed_pseudo_volume: polytope " + std::to_string(i) + " lives in C^" +
                       std::to_string(ks[static_cast<std::size_t>(i)].dim()) + ", expected C^" + std::to_string(n));
    }
  }
  if (!(t > 0.0)) throw InputError("mixed_pseudo_volume: t must be positive");
  std::vector<SectionSpace> spaces;
  for (const auto& k : ks) spaces.push_back(SectionSpace::exponential_sum(k.vertices()));
  const Eigen::MatrixXd frame = detail::relevant_directions(ks);
  const int k = static_cast<int>(frame.cols());
  const int m = 2 * n;
  const double norm = pseudo_volume_normalization(n);
  if (k == 0) return {};  // every spectrum is a single point: zero Hessians
  const double fiber = unit_ball_volume(m - k);
  const double tn = std::pow(t, n);
  auto density = [&](std::span<const double> p) {
    double r2 = 0.0;
    for (double v : p) r2 += v * v;
    const double weight = fiber * std::pow(std::max(0.0, 1.0 - r2), 0.5 * (m - k));
    const Eigen::VectorXd w = frame * Eigen::Map<const Eigen::VectorXd>(p.data(), k);
    std::vector<double> x(w.data(), w.data() + m);
    for (double& v : x) v *= t;
    const ComplexPoint z = ComplexPoint::from_real(x);
    std::vector<HermitianMatrix> hs;
    for (const auto& s : spaces) hs.push_back(metric_hessian(s, z));
    return norm * weight * tn * mixed_discriminant(hs);
  };
  return integrate(density, Domain::real_ball(std::vector<double>(static_cast<std::size_t>(k), 0.0), 1.0), q);
}

/// V(K_1, ..., K_n) for polytopes in C^n: smoothed integrals on the t grid,
/// extrapolated to t = infinity by Richardson in 1/t on the last two grid
/// points. The error bar is the spread against the extrapolation from the
/// first two points plus the quadrature error.
inline PseudoVolumeResult mixed_pseudo_volume(std::span<const Polytope> ks, const PseudoVolumeOptions& opts = {}) {
  const auto& grid = opts.t_grid;
  if (grid.size() < 3) throw InputError("mixed_pseudo_volume: t grid needs at least 3 values");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw InputError("mixed_pseudo_volume: t grid must be positive and increasing");
    }
  }
  if (ks.empty()) throw InputError("mixed_pseudo_volume: need at least one polytope");
  const int k = static_cast<int>(detail::relevant_directions(ks).cols());
  const QuadratureSpec q = opts.quadrature.value_or(detail::default_slice_quadrature(k));

  PseudoVolumeResult r;
  r.t_grid = grid;
  r.slice_dim = k;
  double quad_err = 0.0;
  for (double t : grid) {
    const QuadratureResult v = smoothed_pseudo_volume(ks, t, q);
    r.values.push_back(v.estimate);
    r.quadrature_errors.push_back(v.standard_error);
    quad_err = std::max(quad_err, v.standard_error);
  }
  const std::size_t last = grid.size() - 1;
  auto richardson = [&](std::size_t a, std::size_t b) {
    return (grid[b] * r.values[b] - grid[a] * r.values[a]) / (grid[b] - grid[a]);
  };
  r.value = richardson(last - 1, last);
  r.extrapolation_error = std::abs(r.value - richardson(last - 2, last - 1)) + quad_err;
  const double d1 = r.values[last - 1] - r.values[last - 2];
  const double d2 = r.values[last] - r.values[last - 1];
  r.non_monotone = d1 * d2 < 0.0 && std::abs(d2) > 3.0 * quad_err && std::abs(d1) > 3.0 * quad_err;
  return r;
}

inline PseudoVolumeResult mixed_pseudo_volume(std::initializer_list<Polytope> ks, const PseudoVolumeOptions& opts = {}) {
  return mixed_pseudo_volume(std::span<const Polytope>(ks.begin(), ks.size()), opts);
}

// ---------------------------------------------------------------------------
// Asymptotics of the zero count in growing balls

struct AsymptoticRow {
  double t = 0.0;
  double estimate = 0.0;      // M_{tB} / t^n
  double standard_error = 0.0;
  double prediction = 0.0;
  std::uint64_t rejected = 0;
  bool valid = true;
};

struct AsymptoticTable {
  std::vector<AsymptoticRow> rows;
  PseudoVolumeResult pseudo_volume;
  double prediction = 0.0;
};

/// For each t: the Monte Carlo average zero count in the ball of radius t about
/// the origin divided by t^n, next to (n!/pi^n)(beta_n/2^n) V(Newton polytopes).
inline AsymptoticTable asymptotic_zero_density(std::span<const SectionSpace> spaces, std::span<const double> ts,
                                               std::uint64_t sample_count, const RandomStream& stream,
                                               const PseudoVolumeOptions& pv = {}) {
  const int n = static_cast<int>(spaces.size());
  if (n != 1 && n != 2) throw InputError("asymptotic_zero_density: only n = 1 and n = 2 are supported");
  if (ts.empty()) throw InputError("asymptotic_zero_density: empty t list");
  std::vector<Polytope> polys;
  for (const auto& s : spaces) polys.push_back(newton_polytope(s));
  AsymptoticTable table;
  table.pseudo_volume = mixed_pseudo_volume(polys, pv);
  table.prediction = asymptotic_density_constant(n) * table.pseudo_volume.value;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    if (!(t > 0.0)) throw InputError("asymptotic_zero_density: t values must be positive");
    const Domain ball = Domain::real_ball(std::vector<double>(static_cast<std::size_t>(2 * n), 0.0), t);
    const AverageZeroEstimate est = estimate_average_zeros(spaces, ball, sample_count, stream.derive(i));
    const double tn = std::pow(t, n);
    table.rows.push_back({t, est.mean / tn, est.standard_error / tn, table.prediction, est.rejected_count, est.valid});
  }
  return table;
}

}  // namespace crofton
