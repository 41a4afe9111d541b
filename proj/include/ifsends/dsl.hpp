#pragma once

// Line-oriented IFS description language:
//
//   dim 2
//   radicand 3
//   map a : [1/2, 0; 0, 1/2] ; [0, 1/4+1/4r]    # r is sqrt(radicand)
//   expect a a b = c a

#include "ifsends/semigroup.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ifsends {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

struct Relation {
  Word lhs;
  Word rhs;
  std::size_t line = 0;
};

struct IfsDocument {
  std::string source;
  IfsSystem system;
  std::vector<Relation> relations;
  std::vector<std::string> diagnostics;
};

namespace detail {

class LineCursor {
 public:
  LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, column(), message); }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'" + found());
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string name() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])))
      fail("expected a name" + found());
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer" + found());
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t small_integer() {
    skip_ws();
    const std::size_t col = column();
    const std::string d = digits();
    if (d.size() > 9) throw ParseError(line_, col, "integer " + d + " is too large");
    return std::stoull(d);
  }

  mpq_class rational() {
    skip_ws();
    const std::size_t col = column();
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    mpz_class num(digits());
    mpz_class den = 1;
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      den = mpz_class(digits());
      if (den == 0) throw ParseError(line_, col, "zero denominator");
    }
    mpq_class q(negative ? mpz_class(-num) : num, den);
    q.canonicalize();
    return q;
  }

  QuadScalar coeff(std::uint32_t radicand) {
    const mpq_class rat = rational();
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const bool minus = text_[pos_] == '-';
      ++pos_;
      mpq_class rad = rational();
      if (pos_ >= text_.size() || text_[pos_] != 'r') fail("expected 'r' after radical coefficient" + found());
      ++pos_;
      if (minus) rad = -rad;
      return QuadScalar(rat, rad, radicand);
    }
    return QuadScalar(rat);
  }

  std::string found() const {
    if (pos_ >= text_.size()) return ", found end of line";
    return std::string(", found '") + text_[pos_] + "'";
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline bool blank(std::string_view s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

inline IfsDocument parse(const std::string& source) {
  IfsDocument doc;
  doc.source = source;
  std::optional<std::size_t> dim;
  std::optional<std::uint32_t> radicand;
  std::vector<Generator> generators;
  std::vector<std::size_t> generator_lines;
  struct PendingRelation {
    std::vector<std::pair<std::string, std::size_t>> lhs, rhs;
    std::size_t line;
  };
  std::vector<PendingRelation> pending;

  std::istringstream in(source);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string_view text = detail::strip_comment(raw);
    if (detail::blank(text)) continue;
    detail::LineCursor cur(text, line_no);
    const std::size_t kw_col = (cur.skip_ws(), cur.column());
    const std::string keyword = cur.name();

    if (!dim) {
      if (keyword != "dim") throw ParseError(line_no, kw_col, "expected 'dim' header");
      const std::size_t col = (cur.skip_ws(), cur.column());
      const auto d = cur.small_integer();
      if (d < 1 || d > kMaxDimension) throw ParseError(line_no, col, "dimension must be 1, 2 or 3");
      dim = d;
    } else if (!radicand) {
      if (keyword != "radicand") throw ParseError(line_no, kw_col, "expected 'radicand' header");
      const std::size_t col = (cur.skip_ws(), cur.column());
      const auto r = cur.small_integer();
      if (!is_square_free(r)) throw ParseError(line_no, col, "radicand " + std::to_string(r) + " is not square-free");
      radicand = static_cast<std::uint32_t>(r);
    } else if (keyword == "map") {
      const std::size_t name_col = (cur.skip_ws(), cur.column());
      Generator g;
      g.name = cur.name();
      for (const auto& other : generators)
        if (other.name == g.name) throw ParseError(line_no, name_col, "duplicate name '" + g.name + "'");
      cur.expect(':');
      const std::size_t matrix_col = (cur.skip_ws(), cur.column());
      cur.expect('[');
      std::vector<std::vector<QuadScalar>> rows(1);
      while (true) {
        rows.back().push_back(cur.coeff(*radicand));
        if (cur.accept(',')) continue;
        if (cur.accept(';')) {
          rows.emplace_back();
          continue;
        }
        cur.expect(']');
        break;
      }
      cur.expect(';');
      const std::size_t vector_col = (cur.skip_ws(), cur.column());
      cur.expect('[');
      std::vector<QuadScalar> t;
      do {
        t.push_back(cur.coeff(*radicand));
      } while (cur.accept(','));
      cur.expect(']');
      if (!cur.at_end()) cur.fail("unexpected trailing input" + cur.found());

      if (rows.size() != *dim)
        throw ParseError(line_no, matrix_col, "matrix has " + std::to_string(rows.size()) + " rows, expected " +
                                                  std::to_string(*dim));
      Matrix m(*dim);
      for (std::size_t i = 0; i < *dim; ++i) {
        if (rows[i].size() != *dim)
          throw ParseError(line_no, matrix_col, "matrix row " + std::to_string(i + 1) + " has " +
                                                    std::to_string(rows[i].size()) + " entries, expected " +
                                                    std::to_string(*dim));
        for (std::size_t j = 0; j < *dim; ++j) m(i, j) = rows[i][j];
      }
      if (t.size() != *dim)
        throw ParseError(line_no, vector_col, "vector has " + std::to_string(t.size()) + " entries, expected " +
                                                  std::to_string(*dim));
      Vector v(*dim);
      for (std::size_t i = 0; i < *dim; ++i) v[i] = t[i];
      g.map = AffineMap(std::move(m), std::move(v));
      const double bound = contraction_bound(g.map);
      if (!(bound < 1.0)) {
        std::ostringstream msg;
        msg << "map '" << g.name << "' is not certified contracting (Frobenius bound " << bound << " >= 1)";
        throw ParseError(line_no, matrix_col, msg.str());
      }
      generators.push_back(std::move(g));
      generator_lines.push_back(line_no);
    } else if (keyword == "expect") {
      PendingRelation rel;
      rel.line = line_no;
      auto read_side = [&](auto& side, bool stop_at_eq) {
        while (!cur.at_end() && !(stop_at_eq && cur.peek() == '=')) {
          const std::size_t col = (cur.skip_ws(), cur.column());
          side.push_back({cur.name(), col});
        }
        if (side.empty()) cur.fail("expected at least one name" + cur.found());
      };
      read_side(rel.lhs, true);
      cur.expect('=');
      read_side(rel.rhs, false);
      pending.push_back(std::move(rel));
    } else if (keyword == "dim" || keyword == "radicand") {
      throw ParseError(line_no, kw_col, "duplicate '" + keyword + "' header");
    } else {
      throw ParseError(line_no, kw_col, "unknown statement '" + keyword + "'");
    }
  }
  if (!dim) throw ParseError(line_no + 1, 1, "missing 'dim' header");
  if (!radicand) throw ParseError(line_no + 1, 1, "missing 'radicand' header");
  if (generators.empty()) throw ParseError(line_no + 1, 1, "no maps declared");

  try {
    doc.system = IfsSystem::admit(*dim, *radicand, generators);
  } catch (const AdmissionError& e) {
    throw ParseError(generator_lines.front(), 1, e.what());
  }
  for (const auto& rel : pending) {
    auto resolve = [&](const auto& side) {
      Word w;
      for (const auto& [name, col] : side) {
        const auto idx = doc.system.index_of(name);
        if (!idx) throw ParseError(rel.line, col, "unknown map '" + name + "'");
        w.push_back(static_cast<std::uint32_t>(*idx));
      }
      return w;
    };
    doc.relations.push_back({resolve(rel.lhs), resolve(rel.rhs), rel.line});
  }
  return doc;
}

/// Canonical text for a system and its relations; parse(serialize(d)) yields
/// the same system and relations.
inline std::string serialize(const IfsSystem& system, const std::vector<Relation>& relations = {}) {
  std::ostringstream os;
  os << "dim " << system.dim() << "\n";
  os << "radicand " << system.radicand() << "\n";
  for (const auto& g : system.generators()) {
    os << "map " << g.name << " : [";
    for (std::size_t i = 0; i < system.dim(); ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < system.dim(); ++j) os << (j ? ", " : "") << g.map.linear(i, j).to_dsl();
    }
    os << "] ; [";
    for (std::size_t i = 0; i < system.dim(); ++i) os << (i ? ", " : "") << g.map.translation[i].to_dsl();
    os << "]\n";
  }
  for (const auto& rel : relations) {
    os << "expect";
    for (auto f : rel.lhs) os << " " << system.name(f);
    os << " =";
    for (auto f : rel.rhs) os << " " << system.name(f);
    os << "\n";
  }
  return os.str();
}

inline std::string serialize(const IfsDocument& doc) { return serialize(doc.system, doc.relations); }

}  // namespace ifsends
