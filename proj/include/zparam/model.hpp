#pragma once

#include "zparam/data.hpp"
#include "zparam/matrix.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace zparam {

enum class ParamKind { w, z };

// Traditional parametrization. Row p of a layer is (w0, w1, .., wd): column 0
// is the bias, columns 1..d multiply the previous layer's nodes.
struct WParams {
  Matrix layer1; // d2 x (d1 + 1)
  Matrix layer2; // d3 x (d2 + 1)

  static WParams zeros(const Architecture& arch);
  Architecture architecture() const noexcept;

  friend bool operator==(const WParams&, const WParams&) = default;
};

// h = s * (c + u . x) for one layer: s and c per node, u one row per node.
struct ZLayer {
  std::vector<double> s;
  std::vector<double> c;
  Matrix u;

  std::size_t nodes() const noexcept { return s.size(); }
  std::size_t fan_in() const noexcept { return u.cols(); }

  friend bool operator==(const ZLayer&, const ZLayer&) = default;
};

// Scale/offset/orientation parametrization. u is not renormalized during
// training, so its norm may drift away from 1; s may change sign.
struct ZParams {
  ZLayer layer1; // d2 nodes, fan-in d1
  ZLayer layer2; // d3 nodes, fan-in d2

  static ZParams zeros(const Architecture& arch);
  Architecture architecture() const noexcept;

  friend bool operator==(const ZParams&, const ZParams&) = default;
};

// Gradient containers have the shape of the parameters they differentiate.
using WGradient = WParams;
using ZGradient = ZParams;

// Throws ShapeMismatch if the containers are internally inconsistent or do
// not match `arch`.
void check_shape(const WParams& p, const Architecture& arch);
void check_shape(const ZParams& p, const Architecture& arch);

struct ForwardTrace {
  std::vector<double> n1;
  std::vector<double> h1;
  std::vector<double> n2;
  std::vector<double> h2;
  std::vector<double> n3;
};

ForwardTrace forward_w(const WParams& params, std::span<const double> x);
ForwardTrace forward_z(const ZParams& params, std::span<const double> x);

// Allocation-free variants for the training loop; `trace` is resized as needed.
void forward_into(const WParams& params, std::span<const double> x, ForwardTrace& trace);
void forward_into(const ZParams& params, std::span<const double> x, ForwardTrace& trace);

// E = sum_k (n3(k) - t(k))^2
double training_error(const ForwardTrace& trace, std::span<const double> target);

// Per node: s = ||w'||, c = w0 / ||w'||, u = w' / ||w'||.
// Throws DegenerateHyperplane on a zero-norm row.
ZParams w_to_z(const WParams& params);

// Per node: w0 = s c, w' = s u.
WParams z_to_w(const ZParams& params);

// Parameter snapshot as CSV with header `layer,node,field,index,value`.
// Layers and nodes are 0-based. w rows use field "w" with index 0 for the
// bias; z rows use fields "s" and "c" (index 0) and "u" with index 1..d so
// that u index i lines up with w index i.
void write_params_csv(std::ostream& out, const WParams& params);
void write_params_csv(std::ostream& out, const ZParams& params);

} // namespace zparam

namespace zparam {

// Flat views used by the gradient checker and the update step. Order: layer 1
// then layer 2; within a z layer, all s, then all c, then u row by row.
std::vector<double> flatten(const WParams& params);
std::vector<double> flatten(const ZParams& params);
void assign_flat(WParams& params, std::span<const double> flat);
void assign_flat(ZParams& params, std::span<const double> flat);

} // namespace zparam
