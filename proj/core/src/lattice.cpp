#include "neasslab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace neasslab {

Geometry geometry_from_string(const std::string& s) {
  if (s == "open") return Geometry::open_box;
  if (s == "torus") return Geometry::torus;
  throw std::invalid_argument("unknown geometry '" + s + "' (expected open|torus)");
}

std::string to_string(Geometry g) {
  return g == Geometry::open_box ? "open" : "torus";
}

bool site_less(const Site& a, const Site& b) {
  if (a[0] != b[0]) return a[0] < b[0];
  return a[1] < b[1];
}

Lattice::Lattice(int dim, int radius, Geometry geometry, int spin) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("lattice dim must be 1 or 2");
  if (radius < 1) throw std::invalid_argument("lattice radius must be >= 1");
  if (spin < 1) throw std::invalid_argument("spin multiplicity must be >= 1");
  dim_ = dim;
  radius_ = radius;
  geometry_ = geometry;
  spin_ = spin;
  for (int a = 0; a < dim; ++a) {
    len_[a] = 2 * radius + 1;
    lo_[a] = -radius;
  }
  if (dim == 1) { len_[1] = 1; lo_[1] = 0; }
  init_sites();
}

Lattice Lattice::chain(int length, Geometry geometry, int spin) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  if (spin < 1) throw std::invalid_argument("spin multiplicity must be >= 1");
  Lattice lat;
  lat.dim_ = 1;
  lat.radius_ = length / 2;
  lat.geometry_ = geometry;
  lat.spin_ = spin;
  lat.len_ = {length, 1};
  lat.lo_ = {-(length / 2), 0};
  lat.init_sites();
  return lat;
}

void Lattice::init_sites() {
  sites_.clear();
  for (int x = lo_[0]; x < lo_[0] + len_[0]; ++x)
    for (int y = lo_[1]; y < lo_[1] + len_[1]; ++y)
      sites_.push_back(Site{x, y});
  // Construction order is already lexicographic.
}

int Lattice::site_index(const Site& s) const {
  for (int a = 0; a < 2; ++a)
    if (s[a] < lo_[a] || s[a] > hi(a)) return -1;
  int ix = s[0] - lo_[0];
  int iy = s[1] - lo_[1];
  return ix * len_[1] + iy;
}

int Lattice::mode_index(const Site& s, int sigma) const {
  int si = site_index(s);
  if (si < 0) throw std::invalid_argument("site outside the lattice box");
  if (sigma < 0 || sigma >= spin_) throw std::invalid_argument("internal level out of range");
  return si * spin_ + sigma;
}

int Lattice::l1(const Site& a, const Site& b) const {
  int d = 0;
  for (int ax = 0; ax < dim_; ++ax) d += std::abs(a[ax] - b[ax]);
  return d;
}

int Lattice::metric(const Site& a, const Site& b) const {
  if (geometry_ == Geometry::open_box) return l1(a, b);
  int d = 0;
  for (int ax = 0; ax < dim_; ++ax) {
    int diff = std::abs(a[ax] - b[ax]);
    d += std::min(diff, len_[ax] - diff);
  }
  return d;
}

int Lattice::diameter(const std::vector<Site>& xs) const {
  int dm = 0;
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j)
      dm = std::max(dm, metric(xs[i], xs[j]));
  return dm;
}

int Lattice::set_distance(const std::vector<Site>& xs, const std::vector<Site>& ys) const {
  if (xs.empty() || ys.empty())
    throw std::invalid_argument("set_distance of an empty set");
  int d = metric(xs[0], ys[0]);
  for (const auto& x : xs)
    for (const auto& y : ys) d = std::min(d, metric(x, y));
  return d;
}

std::vector<Site> Lattice::fatten(const std::vector<Site>& xs, int delta) const {
  if (delta < 0) throw std::invalid_argument("fatten: delta must be >= 0");
  std::vector<Site> out;
  for (const auto& s : sites_) {
    for (const auto& x : xs) {
      if (metric(s, x) <= delta) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;  // subset of sites_, hence already sorted
}

int Lattice::boundary_distance(const std::vector<Site>& xs, int window_radius) const {
  if (xs.empty()) throw std::invalid_argument("boundary_distance of an empty set");
  int best = -1;
  for (const auto& x : xs) {
    int linf = 0;
    for (int ax = 0; ax < dim_; ++ax) linf = std::max(linf, std::abs(x[ax]));
    // Nearest point of Z^d outside {-M..M}^d moves one coordinate to M+1.
    int d = std::max(0, window_radius + 1 - linf);
    best = best < 0 ? d : std::min(best, d);
  }
  return best;
}

std::vector<Site> Lattice::window(int window_radius) const {
  std::vector<Site> out;
  for (const auto& s : sites_) {
    bool in = true;
    for (int ax = 0; ax < dim_; ++ax)
      if (std::abs(s[ax]) > window_radius) { in = false; break; }
    if (in) out.push_back(s);
  }
  return out;
}

std::vector<Site> canonical_sites(const Lattice& lat, std::vector<Site> xs) {
  for (const auto& s : xs)
    if (!lat.contains(s)) throw std::invalid_argument("support site outside the lattice box");
  std::sort(xs.begin(), xs.end(), site_less);
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace neasslab
