#include "zparam/model.hpp"

#include "zparam/csv_io.hpp"
#include "zparam/error.hpp"
#include "zparam/kernels.hpp"
#include "zparam/mathcore.hpp"

#include <algorithm>
#include <concepts>
#include <ostream>
#include <string>

namespace zparam {

namespace {

ZLayer zero_layer(std::size_t nodes, std::size_t fan_in) {
  return ZLayer{std::vector<double>(nodes, 0.0), std::vector<double>(nodes, 0.0),
                Matrix(nodes, fan_in)};
}

void check_layer(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw ShapeMismatch(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                        std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
}

void check_layer(const ZLayer& l, std::size_t nodes, std::size_t fan_in, const char* what) {
  if (l.s.size() != nodes || l.c.size() != nodes)
    throw ShapeMismatch(std::string(what) + ": s/c length does not match node count");
  check_layer(l.u, nodes, fan_in, what);
}

void check_input(std::span<const double> x, std::size_t d1) {
  if (x.size() != d1)
    throw ShapeMismatch("input has length " + std::to_string(x.size()) + ", network expects " +
                        std::to_string(d1));
}

void resize(ForwardTrace& t, const Architecture& a) {
  t.n1.resize(a.d1);
  t.h1.resize(a.d2);
  t.n2.resize(a.d2);
  t.h2.resize(a.d3);
  t.n3.resize(a.d3);
}

// h(p) = w(p,0) + sum_q w(p,q) n(q)
void affine_w(const Matrix& w, std::span<const double> in, std::span<double> h,
              const kernels::KernelTable& k) {
  for (std::size_t p = 0; p < w.rows(); ++p) {
    auto row = w.row(p);
    h[p] = row[0] + k.dot(row.data() + 1, in.data(), in.size());
  }
}

// h(p) = s(p) [c(p) + sum_q u(p,q) n(q)]
void affine_z(const ZLayer& l, std::span<const double> in, std::span<double> h,
              const kernels::KernelTable& k) {
  for (std::size_t p = 0; p < l.nodes(); ++p)
    h[p] = l.s[p] * (l.c[p] + k.dot(l.u.row(p).data(), in.data(), in.size()));
}

void activate(std::span<const double> h, std::span<double> n) {
  for (std::size_t i = 0; i < h.size(); ++i)
    n[i] = activation(h[i]);
}

} // namespace

WParams WParams::zeros(const Architecture& a) {
  validate(a);
  return {Matrix(a.d2, a.d1 + 1), Matrix(a.d3, a.d2 + 1)};
}

Architecture WParams::architecture() const noexcept {
  return {layer1.cols() == 0 ? 0 : layer1.cols() - 1, layer1.rows(), layer2.rows()};
}

ZParams ZParams::zeros(const Architecture& a) {
  validate(a);
  return {zero_layer(a.d2, a.d1), zero_layer(a.d3, a.d2)};
}

Architecture ZParams::architecture() const noexcept {
  return {layer1.fan_in(), layer1.nodes(), layer2.nodes()};
}

void check_shape(const WParams& p, const Architecture& a) {
  check_layer(p.layer1, a.d2, a.d1 + 1, "w layer 1");
  check_layer(p.layer2, a.d3, a.d2 + 1, "w layer 2");
}

void check_shape(const ZParams& p, const Architecture& a) {
  check_layer(p.layer1, a.d2, a.d1, "z layer 1");
  check_layer(p.layer2, a.d3, a.d2, "z layer 2");
}

void forward_into(const WParams& params, std::span<const double> x, ForwardTrace& t) {
  const Architecture a = params.architecture();
  check_shape(params, a);
  check_input(x, a.d1);
  resize(t, a);
  const auto& k = kernels::active();
  t.n1.assign(x.begin(), x.end());
  affine_w(params.layer1, t.n1, t.h1, k);
  activate(t.h1, t.n2);
  affine_w(params.layer2, t.n2, t.h2, k);
  activate(t.h2, t.n3);
}

void forward_into(const ZParams& params, std::span<const double> x, ForwardTrace& t) {
  const Architecture a = params.architecture();
  check_shape(params, a);
  check_input(x, a.d1);
  resize(t, a);
  const auto& k = kernels::active();
  t.n1.assign(x.begin(), x.end());
  affine_z(params.layer1, t.n1, t.h1, k);
  activate(t.h1, t.n2);
  affine_z(params.layer2, t.n2, t.h2, k);
  activate(t.h2, t.n3);
}

ForwardTrace forward_w(const WParams& params, std::span<const double> x) {
  ForwardTrace t;
  forward_into(params, x, t);
  return t;
}

ForwardTrace forward_z(const ZParams& params, std::span<const double> x) {
  ForwardTrace t;
  forward_into(params, x, t);
  return t;
}

double training_error(const ForwardTrace& trace, std::span<const double> target) {
  if (target.size() != trace.n3.size())
    throw ShapeMismatch("target has length " + std::to_string(target.size()) +
                        ", output layer has " + std::to_string(trace.n3.size()));
  double e = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double diff = trace.n3[k] - target[k];
    e += diff * diff;
  }
  return e;
}

namespace {

ZLayer layer_w_to_z(const Matrix& w, int layer) {
  const std::size_t fan_in = w.cols() - 1;
  ZLayer z = zero_layer(w.rows(), fan_in);
  for (std::size_t p = 0; p < w.rows(); ++p) {
    auto row = w.row(p);
    const double norm = l2_norm(row.subspan(1));
    if (!(norm > 0.0))
      throw DegenerateHyperplane(layer, p);
    z.s[p] = norm;
    z.c[p] = row[0] / norm;
    auto u = z.u.row(p);
    for (std::size_t q = 0; q < fan_in; ++q)
      u[q] = row[q + 1] / norm;
  }
  return z;
}

Matrix layer_z_to_w(const ZLayer& z) {
  Matrix w(z.nodes(), z.fan_in() + 1);
  for (std::size_t p = 0; p < z.nodes(); ++p) {
    auto row = w.row(p);
    auto u = z.u.row(p);
    row[0] = z.s[p] * z.c[p];
    for (std::size_t q = 0; q < u.size(); ++q)
      row[q + 1] = z.s[p] * u[q];
  }
  return w;
}

} // namespace

ZParams w_to_z(const WParams& params) {
  check_shape(params, params.architecture());
  if (params.layer1.cols() == 0 || params.layer2.cols() == 0)
    throw ShapeMismatch("w_to_z: empty weight matrix");
  return {layer_w_to_z(params.layer1, 0), layer_w_to_z(params.layer2, 1)};
}

WParams z_to_w(const ZParams& params) {
  check_shape(params, params.architecture());
  return {layer_z_to_w(params.layer1), layer_z_to_w(params.layer2)};
}

void write_params_csv(std::ostream& out, const WParams& params) {
  out << "layer,node,field,index,value\n";
  const Matrix* layers[] = {&params.layer1, &params.layer2};
  for (int l = 0; l < 2; ++l)
    for (std::size_t p = 0; p < layers[l]->rows(); ++p)
      for (std::size_t i = 0; i < layers[l]->cols(); ++i)
        out << l << ',' << p << ",w," << i << ',' << format_real((*layers[l])(p, i)) << '\n';
}

void write_params_csv(std::ostream& out, const ZParams& params) {
  out << "layer,node,field,index,value\n";
  const ZLayer* layers[] = {&params.layer1, &params.layer2};
  for (int l = 0; l < 2; ++l) {
    const ZLayer& z = *layers[l];
    for (std::size_t p = 0; p < z.nodes(); ++p) {
      out << l << ',' << p << ",s,0," << format_real(z.s[p]) << '\n';
      out << l << ',' << p << ",c,0," << format_real(z.c[p]) << '\n';
      for (std::size_t q = 0; q < z.fan_in(); ++q)
        out << l << ',' << p << ",u," << q + 1 << ',' << format_real(z.u(p, q)) << '\n';
    }
  }
}

} // namespace zparam

namespace zparam {

namespace {

template <class W, class Fn>
  requires std::same_as<std::remove_const_t<W>, WParams>
void for_each_block(W& p, Fn&& fn) {
  fn(p.layer1.flat());
  fn(p.layer2.flat());
}

template <class Z, class Fn>
  requires std::same_as<std::remove_const_t<Z>, ZParams>
void for_each_block(Z& p, Fn&& fn) {
  for (auto* l : {&p.layer1, &p.layer2}) {
    fn(std::span(l->s));
    fn(std::span(l->c));
    fn(l->u.flat());
  }
}

template <class Params>
std::vector<double> flatten_impl(const Params& p) {
  std::vector<double> out;
  for_each_block(p, [&](std::span<const double> b) { out.insert(out.end(), b.begin(), b.end()); });
  return out;
}

template <class Params>
void assign_impl(Params& p, std::span<const double> flat) {
  std::size_t total = 0;
  for_each_block(p, [&](std::span<double> b) { total += b.size(); });
  if (total != flat.size())
    throw ShapeMismatch("assign_flat: expected " + std::to_string(total) + " values, got " +
                        std::to_string(flat.size()));
  std::size_t at = 0;
  for_each_block(p, [&](std::span<double> b) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), b.size(), b.begin());
    at += b.size();
  });
}

} // namespace

std::vector<double> flatten(const WParams& params) { return flatten_impl(params); }
std::vector<double> flatten(const ZParams& params) { return flatten_impl(params); }
void assign_flat(WParams& params, std::span<const double> flat) { assign_impl(params, flat); }
void assign_flat(ZParams& params, std::span<const double> flat) { assign_impl(params, flat); }

} // namespace zparam
