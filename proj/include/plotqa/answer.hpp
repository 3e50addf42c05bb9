#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace plotqa {

struct Answer {
  enum class Kind { boolean, text, number, unavailable };
  Kind kind = Kind::unavailable;
  bool flag = false;
  std::string text;
  double number = 0;
  std::string reason;  // why an answer is unavailable

  static Answer yes_no(bool b) { return {Kind::boolean, b, {}, 0, {}}; }
  static Answer of_text(std::string s) { return {Kind::text, false, std::move(s), 0, {}}; }
  static Answer of_number(double v) { return {Kind::number, false, {}, v, {}}; }
  static Answer unavailable(std::string why = {}) {
    return {Kind::unavailable, false, {}, 0, std::move(why)};
  }

  bool available() const { return kind != Kind::unavailable; }
  // "Yes"/"No", the text, the rendered number, or "" when unavailable.
  std::string display() const;
  bool operator==(const Answer& o) const;
};

std::string_view to_string(Answer::Kind k);
Answer::Kind answer_kind_from_string(std::string_view s);

}  // namespace plotqa
