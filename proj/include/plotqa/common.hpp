#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plotqa {

// Error hierarchy. The C API maps each type onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (corpus, templates, annotation JSON, ...).
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};

class UnparseableQuestion : public Error {
 public:
  using Error::Error;
};

// The question is well formed but the data needed to answer it is missing.
class AnswerUnavailable : public Error {
 public:
  using Error::Error;
};

class ExtractionError : public Error {
 public:
  using Error::Error;
};

// Axis-aligned box in pixels; origin top-left, y grows downward.
struct BBox {
  double x = 0, y = 0, w = 0, h = 0;

  double cx() const { return x + w / 2; }
  double cy() const { return y + h / 2; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  bool operator==(const BBox&) const = default;
};

bool overlaps(const BBox& a, const BBox& b);
bool contains(const BBox& outer, const BBox& inner);

// Deterministic RNG. Distributions are implemented here rather than taken
// from <random> so that generated datasets are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  int uniform_int(int lo, int hi);       // inclusive
  bool bernoulli(double p);
  double normal(double mean, double sigma);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_[4];
  std::optional<double> spare_normal_;
};

uint64_t splitmix64(uint64_t x);
// Derive an independent stream seed from a base seed and a purpose tag.
uint64_t derive_seed(uint64_t base, std::string_view tag, uint64_t index = 0);
uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t v);

// String helpers.
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::string capitalize(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Strict number parse: the whole (trimmed) string must be a finite number.
std::optional<double> parse_number(std::string_view s);

// Compact rendering used for thresholds and plain numbers: integers without
// a fraction, otherwise up to six significant digits.
std::string format_plain(double v);

// Answer rendering: up to two decimals, E-notation for magnitudes >= 1e5.
std::string format_answer_number(double v);

// Tick-label E-notation, e.g. 200000 -> "2.000e+5".
std::string format_sci_e(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace plotqa
