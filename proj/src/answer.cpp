#include "plotqa/answer.hpp"

#include "plotqa/common.hpp"

namespace plotqa {

std::string Answer::display() const {
  switch (kind) {
    case Kind::boolean: return flag ? "Yes" : "No";
    case Kind::text: return text;
    case Kind::number: return format_answer_number(number);
    case Kind::unavailable: return "";
  }
  return "";
}

bool Answer::operator==(const Answer& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::boolean: return flag == o.flag;
    case Kind::text: return text == o.text;
    case Kind::number: return number == o.number;
    case Kind::unavailable: return true;
  }
  return false;
}

std::string_view to_string(Answer::Kind k) {
  switch (k) {
    case Answer::Kind::boolean: return "boolean";
    case Answer::Kind::text: return "text";
    case Answer::Kind::number: return "number";
    case Answer::Kind::unavailable: return "unavailable";
  }
  return "unavailable";
}

Answer::Kind answer_kind_from_string(std::string_view s) {
  for (auto k : {Answer::Kind::boolean, Answer::Kind::text, Answer::Kind::number,
                 Answer::Kind::unavailable})
    if (to_string(k) == s) return k;
  throw SchemaError("unknown answer kind '" + std::string(s) + "'");
}

}  // namespace plotqa
