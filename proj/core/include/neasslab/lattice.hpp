#pragma once

#include <array>
#include <string>
#include <vector>

namespace neasslab {

// Hard cap on fermionic modes (spin copies times sites) for Fock-space
// construction; dense matrices beyond 2^16 are not representable on a desk
// machine.  Lattices themselves may be larger (geometry and interaction-norm
// work never builds the full box Fock space).
inline constexpr int kMaxModes = 16;

enum class Geometry { open_box, torus };

Geometry geometry_from_string(const std::string& s);
std::string to_string(Geometry g);

// A lattice site; coordinates beyond `dim` are zero.
using Site = std::array<int, 2>;

// Finite box in Z^d (d = 1 or 2) with open or periodic (torus) metric.
//
// The default box is centered, {-k..k}^d with k = radius.  One-dimensional
// chains may instead be built with an explicit site count L (even L gives
// {-L/2 .. L/2-1}); the effective radius floor(L/2) still controls the
// bulk-compatibility window of the torus metric.
class Lattice {
 public:
  Lattice(int dim, int radius, Geometry geometry, int spin);

  // d = 1 chain with `length` sites.
  static Lattice chain(int length, Geometry geometry, int spin);

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  Geometry geometry() const { return geometry_; }
  int spin() const { return spin_; }

  int length(int axis) const { return len_[axis]; }
  int lo(int axis) const { return lo_[axis]; }
  int hi(int axis) const { return lo_[axis] + len_[axis] - 1; }

  int n_sites() const { return static_cast<int>(sites_.size()); }
  int n_modes() const { return n_sites() * spin_; }

  // Sites in lexicographic order (x0 major, then x1); this order also fixes
  // the Jordan-Wigner mode order used by the Fock-space layer.
  const std::vector<Site>& sites() const { return sites_; }
  int site_index(const Site& s) const;  // -1 if not a lattice site
  bool contains(const Site& s) const { return site_index(s) >= 0; }

  // Mode index of (site, internal level sigma in [0, spin)).
  int mode_index(const Site& s, int sigma) const;

  // Graph metric of the box: l1 for open boxes, coordinate-wise wrap for the
  // torus.  Whenever l1(x,y) <= radius the two metrics agree.
  int metric(const Site& a, const Site& b) const;
  int l1(const Site& a, const Site& b) const;

  int diameter(const std::vector<Site>& xs) const;
  int set_distance(const std::vector<Site>& xs, const std::vector<Site>& ys) const;

  // All lattice sites within metric distance <= delta of X.
  std::vector<Site> fatten(const std::vector<Site>& xs, int delta) const;

  // Min over x in X of the l1 distance from x to the complement (in Z^d) of
  // the centered window Lambda_M = {-M..M}^d.  Zero if X pokes outside.
  int boundary_distance(const std::vector<Site>& xs, int window_radius) const;

  // Sites of the centered window Lambda_M intersected with the box.
  std::vector<Site> window(int window_radius) const;

 private:
  Lattice() = default;
  void init_sites();

  int dim_ = 1;
  int radius_ = 0;
  Geometry geometry_ = Geometry::open_box;
  int spin_ = 1;
  std::array<int, 2> len_ = {0, 1};
  std::array<int, 2> lo_ = {0, 0};
  std::vector<Site> sites_;
};

// Sorted-unique canonical form of a site list; throws on sites outside lat.
std::vector<Site> canonical_sites(const Lattice& lat, std::vector<Site> xs);

bool site_less(const Site& a, const Site& b);

}  // namespace neasslab
