#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zparam {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class ShapeMismatch : public Error {
public:
  using Error::Error;
};

// A weight row with ||w'|| == 0 has no hyperplane, so w -> z is undefined.
class DegenerateHyperplane : public Error {
public:
  DegenerateHyperplane(int layer, std::size_t node)
      : Error("degenerate hyperplane: layer " + std::to_string(layer) + " node " +
              std::to_string(node) + " has zero-norm weights"),
        layer_(layer), node_(node) {}

  int layer() const noexcept { return layer_; }
  std::size_t node() const noexcept { return node_; }

private:
  int layer_;
  std::size_t node_;
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class NoOverlap : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace zparam
