#pragma once

#include <stdexcept>
#include <string>

namespace ktess {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CollinearError : public Error {
 public:
  CollinearError() : Error("points are collinear; no circumcircle") {}
};

class DegenerateAngleError : public Error {
 public:
  DegenerateAngleError() : Error("degenerate angle: points are collinear") {}
};

class GenericityFailure : public Error {
 public:
  using Error::Error;
};

/// Requested depth needs circles that do not fit the populated window.
class WindowTooSmall : public Error {
 public:
  WindowTooSmall(int requested_depth, int k_max_usable)
      : Error("window too small for depth " + std::to_string(requested_depth) +
              "; attainable k_max_usable = " + std::to_string(k_max_usable)),
        requested_depth_(requested_depth),
        k_max_usable_(k_max_usable) {}
  int requested_depth() const { return requested_depth_; }
  int k_max_usable() const { return k_max_usable_; }

 private:
  int requested_depth_;
  int k_max_usable_;
};

class DiskOutsideWindow : public Error {
 public:
  DiskOutsideWindow() : Error("closed disk is not contained in the outer window") {}
  explicit DiskOutsideWindow(const std::string& what) : Error(what) {}
};

class NonGenericUnsupported : public Error {
 public:
  using Error::Error;
};

class DepthUnpopulated : public Error {
 public:
  explicit DepthUnpopulated(int depth)
      : Error("no angle contributes to depth " + std::to_string(depth)), depth_(depth) {}
  int depth() const { return depth_; }

 private:
  int depth_;
};

class OrderOutOfRange : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptySample : public Error {
 public:
  EmptySample() : Error("empty angle sample") {}
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class ConstructionFailure : public Error {
 public:
  using Error::Error;
};

class IncompleteCorrespondence : public Error {
 public:
  using Error::Error;
};

}  // namespace ktess
