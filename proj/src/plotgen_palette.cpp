#include "plotqa/plotgen.hpp"

namespace plotqa::plotgen {

const std::array<PaletteColor, kPaletteSize>& palette() {
  static constexpr std::array<PaletteColor, kPaletteSize> colors = {{
      {"Black", "#000000"},          {"Dim Gray", "#696969"},
      {"Gray", "#808080"},           {"Dark Gray", "#a9a9a9"},
      {"Silver", "#c0c0c0"},         {"Maroon", "#800000"},
      {"Dark Red", "#8b0000"},       {"Brown", "#a52a2a"},
      {"Firebrick", "#b22222"},      {"Crimson", "#dc143c"},
      {"Red", "#ff0000"},            {"Tomato", "#ff6347"},
      {"Coral", "#ff7f50"},          {"Indian Red", "#cd5c5c"},
      {"Light Coral", "#f08080"},    {"Salmon", "#fa8072"},
      {"Dark Salmon", "#e9967a"},    {"Orange Red", "#ff4500"},
      {"Dark Orange", "#ff8c00"},    {"Orange", "#ffa500"},
      {"Gold", "#ffd700"},           {"Dark Goldenrod", "#b8860b"},
      {"Goldenrod", "#daa520"},      {"Peru", "#cd853f"},
      {"Chocolate", "#d2691e"},      {"Saddle Brown", "#8b4513"},
      {"Sienna", "#a0522d"},         {"Rosy Brown", "#bc8f8f"},
      {"Tan", "#d2b48c"},            {"Burlywood", "#deb887"},
      {"Olive", "#808000"},          {"Olive Drab", "#6b8e23"},
      {"Dark Olive Green", "#556b2f"}, {"Yellow Green", "#9acd32"},
      {"Lawn Green", "#7cfc00"},     {"Chartreuse", "#7fff00"},
      {"Green Yellow", "#adff2f"},   {"Dark Green", "#006400"},
      {"Green", "#008000"},          {"Forest Green", "#228b22"},
      {"Lime Green", "#32cd32"},     {"Light Green", "#90ee90"},
      {"Pale Green", "#98fb98"},     {"Dark Sea Green", "#8fbc8f"},
      {"Medium Sea Green", "#3cb371"}, {"Sea Green", "#2e8b57"},
      {"Spring Green", "#00ff7f"},   {"Medium Aquamarine", "#66cdaa"},
      {"Light Sea Green", "#20b2aa"}, {"Dark Cyan", "#008b8b"},
      {"Teal", "#008080"},           {"Dark Turquoise", "#00ced1"},
      {"Turquoise", "#40e0d0"},      {"Cadet Blue", "#5f9ea0"},
      {"Steel Blue", "#4682b4"},     {"Sky Blue", "#87ceeb"},
      {"Deep Sky Blue", "#00bfff"},  {"Dodger Blue", "#1e90ff"},
      {"Cornflower Blue", "#6495ed"}, {"Royal Blue", "#4169e1"},
      {"Blue", "#0000ff"},           {"Medium Blue", "#0000cd"},
      {"Dark Blue", "#00008b"},      {"Navy", "#000080"},
      {"Midnight Blue", "#191970"},  {"Slate Blue", "#6a5acd"},
      {"Dark Slate Blue", "#483d8b"}, {"Medium Purple", "#9370db"},
      {"Blue Violet", "#8a2be2"},    {"Indigo", "#4b0082"},
      {"Dark Orchid", "#9932cc"},    {"Dark Magenta", "#8b008b"},
      {"Medium Violet Red", "#c71585"},
  }};
  return colors;
}

}  // namespace plotqa::plotgen
