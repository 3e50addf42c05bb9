#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plotqa::corpus {

enum class ValueKind { integer, floating, percentage };

std::string_view to_string(ValueKind k);
ValueKind value_kind_from_string(std::string_view s);

struct IndicatorVariable {
  std::string name;
  std::string unit_phrase;           // lower-case phrase used in questions
  std::string plural_entity_phrase;  // entity kind, e.g. "countries"
  double min = 0;
  double max = 0;
  ValueKind kind = ValueKind::floating;

  bool operator==(const IndicatorVariable&) const = default;
};

struct Series {
  std::string legend_label;
  std::vector<double> values;
  bool operator==(const Series&) const = default;
};

struct PlotData {
  IndicatorVariable indicator;
  std::string x_label;     // axis title of the categorical dimension
  std::string x_plural;    // "years", "countries", ...
  std::string x_singular;  // "year", "country", ...
  std::string y_label;     // axis title of the value dimension
  std::string title;
  std::vector<std::string> x_categories;
  std::vector<Series> series;

  bool operator==(const PlotData&) const = default;
};

// Entity vocabulary keyed by plural phrase.
struct EntityKind {
  std::string plural;
  std::string singular;
  std::vector<std::string> names;
};

const std::vector<EntityKind>& entity_kinds();
const EntityKind* find_entity_kind(std::string_view plural);
const EntityKind& years_kind();

inline constexpr int kMinCategories = 2;
inline constexpr int kMaxCategories = 12;
inline constexpr int kMinSeries = 1;
inline constexpr int kMaxSeries = 4;
inline constexpr int kFirstYear = 1960;
inline constexpr int kLastYear = 2016;
inline constexpr double kMaxValue = 3.5e15;

// Parse corpus text (one record per line: name | unit | entities | min | max | kind).
std::vector<IndicatorVariable> parse_corpus(std::string_view text);
std::vector<IndicatorVariable> load_corpus(const std::string& path);
// The corpus shipped with the library.
const std::vector<IndicatorVariable>& default_corpus();
std::string_view default_corpus_text();

void validate(const IndicatorVariable& v);
// Empty when all PlotData invariants hold.
std::vector<std::string> check_plot_data(const PlotData& d);

PlotData sample_plot_data(const std::vector<IndicatorVariable>& corpus, uint64_t seed);

}  // namespace plotqa::corpus
