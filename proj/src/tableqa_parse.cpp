#include <algorithm>

#include "plotqa/common.hpp"
#include "plotqa/tableqa.hpp"

namespace plotqa::tableqa {

using Op = LogicalForm::Op;
using LF = LogicalForm;

namespace {

LF call(Op op, std::vector<LF> args) { return LF::call(op, std::move(args)); }
LF s(const std::string& v) { return LF::lit(v); }

}  // namespace

std::optional<LogicalForm> logical_form_for(int id, const qgen::Bindings& b) {
  auto get = [&](const char* slot) -> const std::string& {
    const auto it = b.find(slot);
    if (it == b.end())
      throw Error("template " + std::to_string(id) + " needs binding {" + std::string(slot) + "}");
    return it->second;
  };
  auto legend = [&](const char* slot) { return LF::col_named(get(slot)); };
  auto single = [&] { return LF::series(get("Y")); };
  auto column = [&](LF ref) { return call(Op::column, {std::move(ref)}); };
  auto cell = [&](const char* tick, LF ref) { return call(Op::cell, {s(get(tick)), std::move(ref)}); };
  auto threshold = [&] { return LF::lit(*parse_number(get("N"))); };

  switch (id) {
    case 25: return call(Op::monotonic_increasing, {column(legend("L"))});
    case 33: return cell("T1", single());
    case 34: return cell("T1", legend("L"));
    case 35: return call(Op::monotonic_increasing, {column(single())});
    case 36: return call(Op::strictly_dominates, {s(">"), column(legend("L1")), column(legend("L2"))});
    case 37: return call(Op::strictly_dominates, {s("<"), column(legend("L1")), column(legend("L2"))});
    case 38: return call(Op::max, {column(single())});
    case 39: return call(Op::min, {column(single())});
    case 40: return call(Op::argmax, {column(single())});
    case 41: return call(Op::argmin, {column(single())});
    case 42: return call(Op::max, {column(legend("L"))});
    case 43: return call(Op::min, {column(legend("L"))});
    case 44: return call(Op::argmax, {column(legend("L"))});
    case 45: return call(Op::argmin, {column(legend("L"))});
    case 46: return call(Op::sum, {column(LF::col_at(0))});
    case 47: return call(Op::diff, {cell("T1", single()), cell("T2", single())});
    case 48: return call(Op::mean, {column(single())});
    case 49: return call(Op::median, {column(single())});
    case 50: return call(Op::sum, {column(legend("L"))});
    case 51: return call(Op::diff, {cell("T1", legend("L")), cell("T2", legend("L"))});
    case 52: return call(Op::diff, {cell("T1", legend("L1")), cell("T2", legend("L2"))});
    case 53: return call(Op::mean, {column(legend("L"))});
    case 54:
    case 55: return call(Op::diff, {cell("T1", legend("L1")), cell("T1", legend("L2"))});
    case 56: return call(Op::count_where, {column(single()), s(">"), threshold()});
    case 57:
      return call(Op::majority_where,
                  {call(Op::slice, {column(single()), s(get("T1")), s(get("T2")), s(get("INCL"))}),
                   s(">"), threshold()});
    case 58: return call(Op::ratio, {cell("T1", single()), cell("T2", single())});
    case 59: return call(Op::compare, {s("<"), cell("T1", single()), cell("T2", single())});
    case 60: return call(Op::count_where, {column(legend("L")), s(">"), threshold()});
    case 61: return call(Op::ratio, {cell("T1", legend("L")), cell("T2", legend("L"))});
    case 62: return call(Op::compare, {s("<"), cell("T1", legend("L")), cell("T2", legend("L"))});
    case 63:
      return call(Op::compare,
                  {s(">"), call(Op::abs, {call(Op::diff, {cell("T1", single()), cell("T2", single())})}),
                   call(Op::max_gap_except, {column(single()), s(get("T1")), s(get("T2"))})});
    case 64:
      return call(Op::diff, {call(Op::nth_from, {s("top"), LF::lit(1.0), column(single())}),
                             call(Op::nth_from, {s("top"), LF::lit(2.0), column(single())})});
    case 65:
      return call(Op::compare, {s(">"), call(Op::add, {cell("T1", single()), cell("T2", single())}),
                                call(Op::max, {column(single())})});
    case 66:
      return call(Op::diff, {call(Op::max, {column(single())}), call(Op::min, {column(single())})});
    case 67:
      return call(Op::count_where,
                  {column(single()), s(">"), call(Op::mean, {column(single())})});
    case 68:
      return call(Op::compare,
                  {s(">"), call(Op::diff, {cell("T1", legend("L1")), cell("T2", legend("L1"))}),
                   call(Op::diff, {cell("T1", legend("L2")), cell("T2", legend("L2"))})});
    case 69:
      return call(Op::diff, {call(Op::nth_from, {s("top"), LF::lit(1.0), column(legend("L"))}),
                             call(Op::nth_from, {s("top"), LF::lit(2.0), column(legend("L"))})});
    case 70:
      return call(Op::diff,
                  {call(Op::max, {column(legend("L"))}), call(Op::min, {column(legend("L"))})});
    case 71:
      return call(Op::count_where,
                  {column(legend("L")), s(">"), call(Op::mean, {column(legend("L"))})});
    case 72:
      return call(Op::strictly_dominates,
                  {s(">"), call(Op::add, {column(legend("L1")), column(legend("L2"))}),
                   column(legend("L3"))});
    case 73:
      return call(Op::compare,
                  {s(">"), call(Op::add, {cell("T1", legend("L1")), cell("T2", legend("L1"))}),
                   call(Op::max, {column(legend("L2"))})});
    case 74:
      return call(Op::strictly_dominates,
                  {s(">"), call(Op::add, {column(legend("L1")), column(legend("L2"))}),
                   call(Op::add, {column(legend("L3")), column(legend("L4"))})});
    default: return std::nullopt;
  }
}

namespace {

struct Candidate {
  int template_id;
  qgen::Bindings bindings;
  int validated = 0;
  size_t literal_chars = 0;
};

// Nullopt when a binding contradicts the table headers.
std::optional<int> validate(const qgen::Template& t, const qgen::Bindings& b,
                            const ParseContext& ctx) {
  auto has = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  int score = 0;
  for (const auto& [slot, value] : b) {
    if (slot == "T1" || slot == "T2") {
      if (!has(ctx.row_headers, value)) return std::nullopt;
      ++score;
    } else if (qgen::is_legend_slot(slot)) {
      if (!has(ctx.col_headers, value)) return std::nullopt;
      ++score;
    } else if (slot == "Y" && !t.uses_legend()) {
      for (const auto& c : ctx.col_headers)
        if (iequals(c, value)) {
          ++score;
          break;
        }
    }
  }
  return score;
}

size_t literal_chars(const qgen::Template& t, const qgen::Bindings& b, size_t text_len) {
  size_t free_len = 0;
  for (const auto& tok : t.tokens) {
    if (!tok.is_slot || qgen::is_decoration(tok.text)) continue;
    static const std::set<std::string> vocab = {"XP", "XS", "ORD", "FIG", "INCL"};
    if (vocab.count(tok.text)) continue;
    free_len += b.at(tok.text).size();
  }
  return text_len - std::min(free_len, text_len);
}

}  // namespace

ParseResult parse(std::string_view text, const ParseContext* ctx, const qgen::Lexicon& lex,
                  const std::vector<qgen::Template>& templates) {
  const std::string raw = qgen::unapply_lexicon(trim(text), lex);
  std::optional<Candidate> best;
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.validated != b.validated) return a.validated > b.validated;
    if (a.literal_chars != b.literal_chars) return a.literal_chars > b.literal_chars;
    if (a.template_id != b.template_id) return a.template_id < b.template_id;
    return a.bindings < b.bindings;
  };
  for (const auto& t : templates) {
    for (auto& b : qgen::match(t, raw)) {
      Candidate c{t.id, std::move(b)};
      if (ctx) {
        const auto score = validate(t, c.bindings, *ctx);
        if (!score) continue;
        c.validated = *score;
      }
      c.literal_chars = literal_chars(t, c.bindings, raw.size());
      if (!best || better(c, *best)) best = std::move(c);
    }
  }
  if (!best) throw UnparseableQuestion("no template matches: " + std::string(text));
  ParseResult r;
  r.template_id = best->template_id;
  r.bindings = std::move(best->bindings);
  r.lf = logical_form_for(r.template_id, r.bindings);
  return r;
}

Answer answer(std::string_view text, const SemiStructuredTable& t, const ExecOptions& opt) {
  try {
    const auto ctx = ParseContext::of(t);
    const auto p = parse(text, &ctx);
    if (!p.lf) return Answer::unavailable("question is not answerable from a table");
    return execute(*p.lf, build_kg(t), opt);
  } catch (const Error& e) {
    return Answer::unavailable(e.what());
  }
}

}  // namespace plotqa::tableqa
