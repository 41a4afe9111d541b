#pragma once

// Desk-scale attractor: exact point clouds w(seed) over all words of a fixed
// length, walk encodings, epsilon-chain components and the image set C of the
// constant maps.

#include "ifsends/ends.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace ifsends {

inline constexpr std::size_t kDefaultCloudCap = 2'000'000;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FloatPoint = std::array<double, 3>;

inline FloatPoint to_float_point(const Point& p) {
  FloatPoint out{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < p.dim() && i < 3; ++i) out[i] = p[i].to_double();
  return out;
}

inline double distance(const FloatPoint& a, const FloatPoint& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Upper bound on the spectral norm of a float matrix: exact closed form for
/// d <= 2 (with a relative slack), Frobenius otherwise.
inline double spectral_bound(const Matrix& m) {
  std::vector<double> a;
  for (const auto& x : m.entries()) a.push_back(x.to_double());
  double sigma = 0.0;
  if (m.dim() == 1) {
    sigma = std::abs(a[0]);
  } else if (m.dim() == 2) {
    const double fro2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
    const double det = a[0] * a[3] - a[1] * a[2];
    const double disc = std::max(0.0, fro2 * fro2 - 4.0 * det * det);
    sigma = std::sqrt(std::max(0.0, (fro2 + std::sqrt(disc)) / 2.0));
    sigma = std::min(sigma, std::sqrt(fro2));
  } else {
    double fro2 = 0.0;
    for (double v : a) fro2 += v * v;
    sigma = std::sqrt(fro2);
  }
  return sigma * (1.0 + 1e-9) + 1e-15;
}

struct CloudOptions {
  std::size_t cap = kDefaultCloudCap;            // on |F|^L, before deduplication
  std::size_t linear_part_cap = 200'000;         // distinct linear parts tracked per layer
};

/// Exact points w(seed) for all words w of length L, with a certified bound
/// `error_radius` on the distance from any attractor point to the cloud.
struct PointCloud {
  std::size_t dim = 0;
  int word_length = 0;
  std::vector<Point> points;
  std::vector<FloatPoint> coords;
  /// max |M_w| over words of length L (upper bound, in doubles).
  double contraction_power = 0.0;
  /// Upper bound on the attractor diameter used for the error radius.
  double diameter_bound = 0.0;
  double error_radius = 0.0;
  /// lambda^L times the system's diameter bound; never smaller than error_radius.
  double nominal_error_radius = 0.0;

  std::size_t size() const { return points.size(); }

  /// A word w with points[i] == w(seed).
  Word word_of(std::size_t i) const {
    Word w;
    std::size_t idx = i;
    for (std::size_t layer = provenance.size(); layer-- > 0;) {
      const auto [parent, gen] = provenance[layer][idx];
      w.push_back(gen);
      idx = parent;
    }
    return w;
  }

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> provenance;
};

namespace detail {

inline std::size_t saturating_pow(std::size_t base, int exp, std::size_t limit) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

/// max |M_w| over words of length L, by iterating the set of distinct linear
/// parts. Falls back to submultiplicativity once the set grows past the cap.
inline double word_norm_bound(const IfsSystem& system, int length, std::size_t cap) {
  std::vector<Matrix> layer{Matrix::identity(system.dim())};
  for (int j = 1; j <= length; ++j) {
    std::vector<Matrix> next;
    std::unordered_multimap<std::size_t, std::uint32_t> seen;
    bool overflow = false;
    for (const auto& g : system.generators()) {
      for (const auto& q : layer) {
        Matrix m = g.map.linear * q;
        const std::size_t h = m.hash();
        auto [lo, hi] = seen.equal_range(h);
        bool dup = false;
        for (auto it = lo; it != hi && !dup; ++it) dup = next[it->second] == m;
        if (dup) continue;
        seen.emplace(h, static_cast<std::uint32_t>(next.size()));
        next.push_back(std::move(m));
        if (next.size() > cap) {
          overflow = true;
          break;
        }
      }
      if (overflow) break;
    }
    if (overflow) {
      double bound = 0.0;
      for (const auto& q : layer) bound = std::max(bound, spectral_bound(q));
      return bound * std::pow(system.lambda(), length - j + 1);
    }
    layer = std::move(next);
  }
  double bound = 0.0;
  for (const auto& q : layer) bound = std::max(bound, spectral_bound(q));
  return bound;
}

inline double bbox_diagonal(const std::vector<FloatPoint>& pts) {
  if (pts.empty()) return 0.0;
  FloatPoint lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  return distance(lo, hi);
}

}  // namespace detail

inline PointCloud sample_cloud(const IfsSystem& system, int length, const CloudOptions& opts = {}) {
  if (length < 0) throw std::invalid_argument("word length must be non-negative");
  if (detail::saturating_pow(system.size(), length, opts.cap) > opts.cap)
    throw CapacityError("cloud of " + std::to_string(system.size()) + "^" + std::to_string(length) +
                        " words exceeds cap of " + std::to_string(opts.cap));
  PointCloud cloud;
  cloud.dim = system.dim();
  cloud.word_length = length;

  const auto seed_gen = system.first_nonconstant();
  if (!seed_gen) {
    // Every map is constant, so the attractor is the set of their values.
    cloud.provenance.emplace_back();
    for (std::uint32_t f = 0; f < system.size(); ++f) {
      const Point& v = system.map(f).translation;
      if (std::find(cloud.points.begin(), cloud.points.end(), v) != cloud.points.end()) continue;
      cloud.points.push_back(v);
      cloud.provenance.back().push_back({0, f});
    }
    for (const auto& p : cloud.points) cloud.coords.push_back(to_float_point(p));
    cloud.diameter_bound = detail::bbox_diagonal(cloud.coords);
    return cloud;
  }

  std::vector<Point> layer{fixed_point(system.map(*seed_gen))};
  for (int j = 1; j <= length; ++j) {
    std::vector<Point> next;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> prov;
    std::unordered_multimap<std::size_t, std::uint32_t> seen;
    seen.reserve(layer.size() * system.size());
    for (std::uint32_t parent = 0; parent < layer.size(); ++parent) {
      for (std::uint32_t f = 0; f < system.size(); ++f) {
        Point q = apply(system.map(f), layer[parent]);
        const std::size_t h = q.hash();
        auto [lo, hi] = seen.equal_range(h);
        bool dup = false;
        for (auto it = lo; it != hi && !dup; ++it) dup = next[it->second] == q;
        if (dup) continue;
        seen.emplace(h, static_cast<std::uint32_t>(next.size()));
        next.push_back(std::move(q));
        prov.push_back({parent, f});
      }
    }
    layer = std::move(next);
    cloud.provenance.push_back(std::move(prov));
  }
  cloud.points = std::move(layer);
  cloud.coords.reserve(cloud.points.size());
  for (const auto& p : cloud.points) cloud.coords.push_back(to_float_point(p));

  // Every attractor point x = w(y) with y in A lies within |M_w| diam(A) of
  // w(seed), so diam(A) <= diam(cloud) + 2 mu diam(A).
  const double mu = detail::word_norm_bound(system, length, opts.linear_part_cap);
  double diam = system.diameter_bound();
  if (2.0 * mu < 1.0) diam = std::min(diam, detail::bbox_diagonal(cloud.coords) * (1.0 + 1e-12) / (1.0 - 2.0 * mu));
  cloud.contraction_power = mu;
  cloud.diameter_bound = diam;
  cloud.error_radius = mu * diam;
  cloud.nominal_error_radius = std::max(cloud.error_radius, std::pow(system.lambda(), length) * system.diameter_bound());
  return cloud;
}

/// The eventually periodic walk preperiod . period^infinity.
struct WalkSpec {
  Word preperiod;
  Word period;
};

namespace detail {

inline void check_walk(const IfsSystem& system, const WalkSpec& walk) {
  if (walk.period.empty()) throw std::invalid_argument("walk period must be nonempty");
  for (auto f : walk.preperiod)
    if (f >= system.size()) throw std::out_of_range("walk letter out of range");
  for (auto f : walk.period)
    if (f >= system.size()) throw std::out_of_range("walk letter out of range");
}

/// Length of the shortest constant prefix of the walk, if any. Checking
/// |preperiod| + (d+1)|period| letters suffices: the image of M_period^j
/// stabilizes after d powers.
inline std::optional<std::pair<std::size_t, AffineMap>> constant_prefix(const IfsSystem& system,
                                                                        const WalkSpec& walk) {
  const std::size_t limit = walk.preperiod.size() + (system.dim() + 1) * walk.period.size();
  std::optional<AffineMap> acc;
  for (std::size_t i = 0; i < limit; ++i) {
    const std::uint32_t f = i < walk.preperiod.size()
                                ? walk.preperiod[i]
                                : walk.period[(i - walk.preperiod.size()) % walk.period.size()];
    acc = acc ? compose(*acc, system.map(f)) : system.map(f);
    if (is_constant(*acc)) return std::make_pair(i + 1, *acc);
  }
  return std::nullopt;
}

}  // namespace detail

/// A walk is a ray exactly when none of its prefixes is a constant map.
inline bool is_ray(const IfsSystem& system, const WalkSpec& walk) {
  detail::check_walk(system, walk);
  return !detail::constant_prefix(system, walk).has_value();
}

/// The point the walk encodes: preperiod(fixed point of the period map), or
/// the value of the first constant prefix.
inline Point encode_walk(const IfsSystem& system, const WalkSpec& walk) {
  detail::check_walk(system, walk);
  if (auto prefix = detail::constant_prefix(system, walk)) return prefix->second.translation;
  const Point p = fixed_point(word_evaluate(system, walk.period));
  return walk.preperiod.empty() ? p : apply(word_evaluate(system, walk.preperiod), p);
}

struct ComponentSummary {
  std::size_t size = 0;
  FloatPoint bbox_min{};
  FloatPoint bbox_max{};
  double diameter = 0.0;
};

struct ComponentReport {
  double epsilon = 0.0;
  double degeneracy_threshold = 0.0;
  std::size_t component_count = 0;
  std::size_t nondegenerate_count = 0;
  /// The whole cloud is one point: counted as neither nondegenerate nor isolated.
  bool single_point = false;
  std::vector<ComponentSummary> components;
  std::vector<std::uint32_t> labels;  // component of each cloud point
};

namespace detail {

using CellKey = std::array<std::int64_t, 3>;

struct CellHash {
  std::size_t operator()(const CellKey& c) const {
    std::size_t h = 0;
    for (auto v : c) hash_mix(h, std::hash<std::int64_t>{}(v));
    return h;
  }
};

class PointGrid {
 public:
  PointGrid(const std::vector<FloatPoint>& pts, std::size_t dim, double cell) : pts_(pts), dim_(dim), cell_(cell) {
    for (std::uint32_t i = 0; i < pts.size(); ++i) cells_[key(pts[i])].push_back(i);
  }

  CellKey key(const FloatPoint& p) const {
    CellKey k{0, 0, 0};
    for (std::size_t i = 0; i < dim_; ++i) k[i] = static_cast<std::int64_t>(std::floor(p[i] / cell_));
    return k;
  }

  /// Calls fn(j) for every point in cells at Chebyshev distance exactly r.
  template <typename Fn>
  void for_ring(const CellKey& c, std::int64_t r, Fn&& fn) const {
    const std::int64_t rx = r;
    const std::int64_t ry = dim_ >= 2 ? r : 0;
    const std::int64_t rz = dim_ >= 3 ? r : 0;
    for (std::int64_t dx = -rx; dx <= rx; ++dx) {
      for (std::int64_t dy = -ry; dy <= ry; ++dy) {
        for (std::int64_t dz = -rz; dz <= rz; ++dz) {
          if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != r) continue;
          auto it = cells_.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == cells_.end()) continue;
          for (auto j : it->second) fn(j);
        }
      }
    }
  }

  const std::vector<std::uint32_t>* cell(const CellKey& c) const {
    auto it = cells_.find(c);
    return it == cells_.end() ? nullptr : &it->second;
  }

  const std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash>& cells() const { return cells_; }

  /// Offsets of all cells within Chebyshev distance r, excluding the origin.
  std::vector<CellKey> offsets(std::int64_t r) const {
    std::vector<CellKey> out;
    const std::int64_t ry = dim_ >= 2 ? r : 0;
    const std::int64_t rz = dim_ >= 3 ? r : 0;
    for (std::int64_t dx = -r; dx <= r; ++dx)
      for (std::int64_t dy = -ry; dy <= ry; ++dy)
        for (std::int64_t dz = -rz; dz <= rz; ++dz)
          if (dx || dy || dz) out.push_back({dx, dy, dz});
    return out;
  }

  double nearest(const FloatPoint& q) const {
    const CellKey c = key(q);
    double best = std::numeric_limits<double>::infinity();
    const std::int64_t max_r = span() + 1;
    for (std::int64_t r = 0; r <= max_r; ++r) {
      for_ring(c, r, [&](std::uint32_t j) { best = std::min(best, distance(q, pts_[j])); });
      if (best <= static_cast<double>(r) * cell_) break;
    }
    return best;
  }

 private:
  std::int64_t span() const {
    std::int64_t s = 0;
    bool first = true;
    CellKey lo{}, hi{};
    for (const auto& [k, v] : cells_) {
      for (int i = 0; i < 3; ++i) {
        lo[i] = first ? k[i] : std::min(lo[i], k[i]);
        hi[i] = first ? k[i] : std::max(hi[i], k[i]);
      }
      first = false;
    }
    for (int i = 0; i < 3; ++i) s = std::max(s, hi[i] - lo[i]);
    return s;
  }

  const std::vector<FloatPoint>& pts_;
  std::size_t dim_;
  double cell_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

inline double cross(const FloatPoint& o, const FloatPoint& a, const FloatPoint& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline double diameter_of(std::vector<FloatPoint> pts, std::size_t dim) {
  if (pts.size() < 2) return 0.0;
  if (dim == 1) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a[0] < b[0]; });
    return (*hi)[0] - (*lo)[0];
  }
  std::vector<FloatPoint> cand;
  if (dim == 2) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
      cand = pts;
    } else {
      std::vector<FloatPoint> hull(2 * pts.size());
      std::size_t k = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
      }
      for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
        hull[k++] = pts[i - 1];
      }
      hull.resize(k > 1 ? k - 1 : k);
      cand = std::move(hull);
    }
  } else {
    cand = std::move(pts);
  }
  if (cand.size() > 4000) return bbox_diagonal(cand);
  double best = 0.0;
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j) best = std::max(best, distance(cand[i], cand[j]));
  return best;
}

inline void check_epsilon(const PointCloud& cloud, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (epsilon < 2.0 * cloud.error_radius)
    throw std::invalid_argument("epsilon must be at least twice the cloud error radius");
}

}  // namespace detail

/// Union-find over pairs at distance <= epsilon. The grid cells have
/// diagonal epsilon, so each cell is joined outright and neighbouring cells
/// need only one close pair. Components are numbered by their lowest point
/// index.
inline ComponentReport count_components(const PointCloud& cloud, double epsilon, double degeneracy_factor = 10.0) {
  detail::check_epsilon(cloud, epsilon);
  ComponentReport rep;
  rep.epsilon = epsilon;
  rep.degeneracy_threshold = degeneracy_factor * epsilon;
  const std::size_t n = cloud.size();
  if (n == 0) return rep;

  const double h = epsilon / std::sqrt(static_cast<double>(cloud.dim)) * (1.0 - 1e-12);
  detail::PointGrid grid(cloud.coords, cloud.dim, h);
  UnionFind uf(n);
  for (const auto& [key, members] : grid.cells())
    for (auto j : members) uf.unite(members.front(), j);
  const auto offsets = grid.offsets(static_cast<std::int64_t>(std::ceil(epsilon / h)));
  for (const auto& [key, members] : grid.cells()) {
    for (const auto& off : offsets) {
      const detail::CellKey other{key[0] + off[0], key[1] + off[1], key[2] + off[2]};
      if (other < key) continue;
      const auto* nb = grid.cell(other);
      if (!nb || uf.find(members.front()) == uf.find(nb->front())) continue;
      bool joined = false;
      for (auto i : members) {
        for (auto j : *nb) {
          if (distance(cloud.coords[i], cloud.coords[j]) <= epsilon) {
            uf.unite(i, j);
            joined = true;
            break;
          }
        }
        if (joined) break;
      }
    }
  }

  std::unordered_map<std::size_t, std::uint32_t> label_of_root;
  rep.labels.resize(n);
  std::vector<std::vector<FloatPoint>> members;
  for (std::uint32_t i = 0; i < n; ++i) {
    auto [it, fresh] = label_of_root.emplace(uf.find(i), static_cast<std::uint32_t>(members.size()));
    if (fresh) members.emplace_back();
    rep.labels[i] = it->second;
    members[it->second].push_back(cloud.coords[i]);
  }
  rep.component_count = members.size();
  rep.single_point = n == 1;
  for (auto& pts : members) {
    ComponentSummary s;
    s.size = pts.size();
    s.bbox_min = s.bbox_max = pts[0];
    for (const auto& p : pts) {
      for (int i = 0; i < 3; ++i) {
        s.bbox_min[i] = std::min(s.bbox_min[i], p[i]);
        s.bbox_max[i] = std::max(s.bbox_max[i], p[i]);
      }
    }
    s.diameter = detail::diameter_of(std::move(pts), cloud.dim);
    if (!rep.single_point && s.diameter > rep.degeneracy_threshold) ++rep.nondegenerate_count;
    rep.components.push_back(s);
  }
  return rep;
}

/// Values of the constant maps found in the ball.
struct IdempotentImageSet {
  std::vector<Point> values;
  int depth = 0;

  bool contains(const Point& p) const { return std::find(values.begin(), values.end(), p) != values.end(); }
};

inline IdempotentImageSet idempotent_images(const CayleyBall& ball) {
  IdempotentImageSet c;
  c.depth = ball.radius();
  std::unordered_multimap<std::size_t, std::uint32_t> seen;
  for (const auto& idem : find_idempotents(ball)) {
    const std::size_t h = idem.value.hash();
    auto [lo, hi] = seen.equal_range(h);
    bool dup = false;
    for (auto it = lo; it != hi && !dup; ++it) dup = c.values[it->second] == idem.value;
    if (dup) continue;
    seen.emplace(h, static_cast<std::uint32_t>(c.values.size()));
    c.values.push_back(idem.value);
  }
  return c;
}

/// Cloud points with no other cloud point within epsilon. These are
/// candidates only: a finite cloud cannot certify isolation.
inline std::vector<std::uint32_t> isolated_candidates(const PointCloud& cloud, double epsilon) {
  detail::check_epsilon(cloud, epsilon);
  std::vector<std::uint32_t> out;
  if (cloud.size() <= 1) return out;
  const double h = epsilon / std::sqrt(static_cast<double>(cloud.dim)) * (1.0 - 1e-12);
  detail::PointGrid grid(cloud.coords, cloud.dim, h);
  const auto offsets = grid.offsets(static_cast<std::int64_t>(std::ceil(epsilon / h)));
  for (std::uint32_t i = 0; i < cloud.size(); ++i) {
    const detail::CellKey key = grid.key(cloud.coords[i]);
    if (grid.cell(key)->size() > 1) continue;
    bool alone = true;
    for (const auto& off : offsets) {
      const auto* nb = grid.cell({key[0] + off[0], key[1] + off[1], key[2] + off[2]});
      if (!nb) continue;
      for (auto j : *nb) {
        if (distance(cloud.coords[i], cloud.coords[j]) <= epsilon) {
          alone = false;
          break;
        }
      }
      if (!alone) break;
    }
    if (alone) out.push_back(i);
  }
  return out;
}

struct GridRaster {
  std::size_t width = 0;
  std::size_t height = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double pixel_size = 0.0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first; 255 = set

  std::size_t set_count() const {
    return static_cast<std::size_t>(std::count(pixels.begin(), pixels.end(), std::uint8_t{255}));
  }
  bool at(std::size_t col, std::size_t row) const { return pixels[row * width + col] == 255; }
};

/// Binary raster of the cloud's bounding box padded by the error radius.
/// One-dimensional clouds become a strip 8 pixels high.
inline GridRaster render_raster(const PointCloud& cloud, int resolution) {
  if (cloud.dim > 2) throw std::invalid_argument("raster output needs dimension <= 2");
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  if (cloud.size() == 0) throw std::invalid_argument("empty cloud");
  FloatPoint lo = cloud.coords[0], hi = cloud.coords[0];
  for (const auto& p : cloud.coords) {
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  const double pad = cloud.error_radius;
  const double res = resolution;
  GridRaster r;
  r.pixel_size = 1.0 / res;
  r.origin_x = lo[0] - pad;
  r.origin_y = lo[1] - pad;
  auto extent = [&](int i) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi[i] - lo[i] + 2 * pad) * res)));
  };
  r.width = extent(0);
  r.height = cloud.dim == 1 ? 8 : extent(1);
  if (r.width * r.height > 400'000'000ULL) throw CapacityError("raster too large");
  r.pixels.assign(r.width * r.height, 0);
  auto cell = [&](double v, double origin, std::size_t n) {
    const double c = std::floor((v - origin) * res);
    return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(n - 1)));
  };
  for (const auto& p : cloud.coords) {
    const std::size_t col = cell(p[0], r.origin_x, r.width);
    if (cloud.dim == 1) {
      for (std::size_t row = 0; row < r.height; ++row) r.pixels[row * r.width + col] = 255;
    } else {
      const std::size_t row = r.height - 1 - cell(p[1], r.origin_y, r.height);
      r.pixels[row * r.width + col] = 255;
    }
  }
  return r;
}

inline std::string to_pgm(const GridRaster& r) {
  std::string out = "P5\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(r.pixels.data()), r.pixels.size());
  return out;
}

/// Largest distance from a point of `from` to the nearest point of `to`.
inline double directed_distance(const PointCloud& from, const PointCloud& to) {
  if (from.dim != to.dim) throw DimensionError("clouds have different dimensions");
  if (to.size() == 0 || from.size() == 0) throw std::invalid_argument("empty cloud");
  const double extent = std::max(detail::bbox_diagonal(to.coords), 1e-12);
  const double cells_per_axis = std::max(1.0, std::pow(static_cast<double>(to.size()), 1.0 / to.dim));
  detail::PointGrid grid(to.coords, to.dim, extent / cells_per_axis);
  double worst = 0.0;
  for (const auto& p : from.coords) worst = std::max(worst, grid.nearest(p));
  return worst;
}

/// Certified upper bound on the Hausdorff distance between the two
/// attractors. Clouds lie inside their attractors, so each direction needs
/// only the error radius of its own source cloud.
inline double hausdorff_upper(const PointCloud& a, const PointCloud& b) {
  const double ab = directed_distance(a, b) + a.error_radius;
  const double ba = directed_distance(b, a) + b.error_radius;
  return std::max(ab, ba);
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// CSV with exact coordinates followed by their double approximations.
inline std::string to_csv(const PointCloud& cloud) {
  static const char* axes[] = {"x", "y", "z"};
  std::ostringstream os;
  for (std::size_t i = 0; i < cloud.dim; ++i) os << (i ? "," : "") << axes[i] << "_exact";
  for (std::size_t i = 0; i < cloud.dim; ++i) os << "," << axes[i];
  os << "\n";
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    for (std::size_t i = 0; i < cloud.dim; ++i) os << (i ? "," : "") << cloud.points[k][i].to_string();
    for (std::size_t i = 0; i < cloud.dim; ++i) os << "," << detail::format_double(cloud.coords[k][i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace ifsends
