#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tfe/error.hpp"
#include "tfe/surface.hpp"

namespace tfe {

namespace {

using nlohmann::json;

int line_of_offset(std::string_view text, size_t offset) {
  int line = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Byte offset of element k of the top-level "terms" array, or npos.
size_t locate_term(std::string_view text, size_t k) {
  size_t key = std::string_view::npos;
  int depth = 0;
  bool in_str = false;
  size_t str_start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (in_str) {
      if (ch == '\\') {
        ++i;
      } else if (ch == '"') {
        in_str = false;
        if (depth == 1 && text.substr(str_start, i - str_start) == "terms") key = i;
      }
      continue;
    }
    if (ch == '"') {
      in_str = true;
      str_start = i + 1;
    } else if (ch == '{' || ch == '[') {
      ++depth;
    } else if (ch == '}' || ch == ']') {
      --depth;
    }
    if (key != std::string_view::npos) break;
  }
  if (key == std::string_view::npos) return key;
  size_t open = text.find('[', key);
  if (open == std::string_view::npos) return open;
  depth = 0;
  in_str = false;
  size_t count = 0;
  for (size_t i = open + 1; i < text.size(); ++i) {
    char ch = text[i];
    if (in_str) {
      if (ch == '\\') ++i;
      else if (ch == '"') in_str = false;
      continue;
    }
    if (depth == 0 && !std::isspace(static_cast<unsigned char>(ch)) && ch != ',' && ch != ']') {
      if (count == k) return i;
      ++count;
    }
    if (ch == '"') in_str = true;
    else if (ch == '{' || ch == '[') ++depth;
    else if (ch == '}' || ch == ']') {
      if (depth == 0) break;
      --depth;
    }
  }
  return std::string_view::npos;
}

[[noreturn]] void term_error(std::string_view text, size_t k, const std::string& msg) {
  std::string where;
  size_t off = locate_term(text, k);
  if (off != std::string_view::npos) where = " (line " + std::to_string(line_of_offset(text, off)) + ")";
  throw FormatError("term " + std::to_string(k) + where + ": " + msg);
}

}  // namespace

TwistorSurface parse_surface_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError("line 1: surface document must be a JSON object");
  if (!doc.contains("degree") || !doc["degree"].is_number_integer()) {
    throw FormatError("key 'degree': missing or not an integer");
  }
  if (!doc.contains("terms") || !doc["terms"].is_array()) {
    throw FormatError("key 'terms': missing or not an array");
  }
  TwistorSurface s;
  s.degree = doc["degree"].get<int>();
  if (s.degree < 1) throw FormatError("key 'degree': must be a positive integer");
  const json& terms = doc["terms"];
  if (terms.empty()) throw FormatError("key 'terms': no terms given");
  for (size_t k = 0; k < terms.size(); ++k) {
    const json& t = terms[k];
    if (!t.is_object()) term_error(text, k, "expected an object");
    if (!t.contains("exp") || !t["exp"].is_array() || t["exp"].size() != 4) {
      term_error(text, k, "'exp' must be an array of 4 integers");
    }
    Term term;
    int sum = 0;
    for (int i = 0; i < 4; ++i) {
      const json& e = t["exp"][i];
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        term_error(text, k, "'exp' entries must be non-negative integers");
      }
      term.exp[i] = e.get<int>();
      sum += term.exp[i];
    }
    if (sum != s.degree) {
      term_error(text, k,
                 "exponents sum to " + std::to_string(sum) + ", expected degree " + std::to_string(s.degree));
    }
    double re = 0.0, im = 0.0;
    if (t.contains("re")) {
      if (!t["re"].is_number()) term_error(text, k, "'re' must be a number");
      re = t["re"].get<double>();
    }
    if (t.contains("im")) {
      if (!t["im"].is_number()) term_error(text, k, "'im' must be a number");
      im = t["im"].get<double>();
    }
    term.coef = cplx(re, im);
    s.terms.push_back(term);
  }
  s.validate();
  return s;
}

TwistorSurface load_surface_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open surface file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_surface_json(ss.str());
}

}  // namespace tfe
