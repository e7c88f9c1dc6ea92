#ifndef BOBB_INSTANCE_IO_HPP
#define BOBB_INSTANCE_IO_HPP

#include <cctype>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "bobb/instance.hpp"
#include "bobb/pareto_store.hpp"

namespace bobb {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

namespace io_detail {

// Token stream over the whole file with '#' comments stripped, tracking the
// source line of the token last read.
class Tokens {
 public:
  explicit Tokens(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::istringstream ls(raw);
      std::string tok;
      while (ls >> tok) toks_.emplace_back(tok, lineno);
    }
  }

  bool done() const { return pos_ >= toks_.size(); }
  // line of the most recently consumed token (end of file otherwise)
  int line() const {
    if (toks_.empty()) return 0;
    if (pos_ == 0) return toks_[0].second;
    return toks_[std::min(pos_ - 1, toks_.size() - 1)].second;
  }

  std::string next(const char* what) {
    if (done()) {
      throw ParseError(toks_.empty() ? 0 : toks_.back().second,
                       std::string("unexpected end of file, expected ") + what);
    }
    return toks_[pos_++].first;
  }

  double next_number(const char* what) {
    std::string tok = next(what);
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(line(), std::string("expected a number for ") + what + ", got '" + tok + "'");
    }
  }

  long long next_int(const char* what) {
    double v = next_number(what);
    if (!is_integral(v, 1e-9)) throw ParseError(line(), std::string(what) + " must be an integer");
    return static_cast<long long>(std::llround(v));
  }

 private:
  std::vector<std::pair<std::string, int>> toks_;
  std::size_t pos_ = 0;
};

inline void expect_keyword(Tokens& t, const char* kw) {
  std::string tok = t.next(kw);
  if (tok != kw) throw ParseError(t.line(), std::string("expected '") + kw + "', got '" + tok + "'");
}

inline bool is_max_token(const std::string& tok) {
  std::string low;
  for (char c : tok) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return low == "max" || low == "maximize";
}

}  // namespace io_detail

// Parses the BOMILP-v1 text format and returns a normalized instance:
// only <= rows (>= flipped, = split in two), integer variables first with
// integral bounds.  Throws ParseError / InstanceError.
inline Instance parse_instance(const std::string& text) {
  using io_detail::Tokens;
  Tokens t(text);
  Instance inst;

  io_detail::expect_keyword(t, "NAME");
  inst.name = t.next("instance name");
  io_detail::expect_keyword(t, "VARS");
  long long ni = t.next_int("integer variable count");
  long long nc = t.next_int("continuous variable count");
  if (ni < 0 || nc < 0 || ni + nc <= 0) throw ParseError(t.line(), "invalid variable counts");
  inst.n_int = static_cast<int>(ni);
  inst.n_cont = static_cast<int>(nc);
  const int n = inst.num_vars();

  for (int pass = 0; pass < 2; ++pass) {
    io_detail::expect_keyword(t, pass == 0 ? "OBJ1" : "OBJ2");
    std::vector<double>& c = pass == 0 ? inst.c1 : inst.c2;
    for (int j = 0; j < n; ++j) {
      std::string tok = t.next("objective coefficient");
      if (io_detail::is_max_token(tok))
        throw ParseError(t.line(), "maximization objectives are not supported; negate the objective");
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        c.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(t.line(), "expected a number for objective coefficient, got '" + tok + "'");
      }
    }
  }

  io_detail::expect_keyword(t, "BOUNDS");
  for (int j = 0; j < n; ++j) {
    double l = t.next_number("lower bound");
    double u = t.next_number("upper bound");
    if (!std::isfinite(l) || !std::isfinite(u))
      throw ParseError(t.line(), "bounds must be finite");
    inst.lower.push_back(l);
    inst.upper.push_back(u);
  }

  io_detail::expect_keyword(t, "ROWS");
  long long m = t.next_int("row count");
  if (m < 0) throw ParseError(t.line(), "negative row count");
  for (long long r = 0; r < m; ++r) {
    std::vector<double> coeffs(n);
    for (int j = 0; j < n; ++j) coeffs[j] = t.next_number("row coefficient");
    std::string op = t.next("row sense");
    double rhs = t.next_number("row rhs");
    if (op == "<=" || op == "<") {
      inst.rows.push_back(dense_row(coeffs, rhs));
    } else if (op == ">=" || op == ">") {
      for (double& v : coeffs) v = -v;
      inst.rows.push_back(dense_row(coeffs, -rhs));
    } else if (op == "=" || op == "==") {
      inst.rows.push_back(dense_row(coeffs, rhs));
      for (double& v : coeffs) v = -v;
      inst.rows.push_back(dense_row(coeffs, -rhs));
    } else {
      throw ParseError(t.line(), "unknown row sense '" + op + "'");
    }
  }
  if (!t.done()) throw ParseError(t.line(), "trailing content after last row");

  normalize_integer_bounds(inst);
  validate_instance(inst);
  return inst;
}

// Writes the instance back in BOMILP-v1 form; parse(write(i)) == i.
inline std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  out << "NAME " << inst.name << "\n";
  out << "VARS " << inst.n_int << " " << inst.n_cont << "\n";
  for (int pass = 0; pass < 2; ++pass) {
    out << (pass == 0 ? "OBJ1" : "OBJ2");
    const std::vector<double>& c = pass == 0 ? inst.c1 : inst.c2;
    for (double v : c) {
      out << " ";
      num(v);
    }
    out << "\n";
  }
  out << "BOUNDS\n";
  for (int j = 0; j < inst.num_vars(); ++j) {
    num(inst.lower[j]);
    out << " ";
    num(inst.upper[j]);
    out << "\n";
  }
  out << "ROWS " << inst.rows.size() << "\n";
  for (const Row& r : inst.rows) {
    std::vector<double> dense(inst.num_vars(), 0.0);
    for (const auto& [j, v] : r.terms) dense[j] = v;
    bool first = true;
    for (double v : dense) {
      if (!first) out << " ";
      num(v);
      first = false;
    }
    out << " <= ";
    num(r.rhs);
    out << "\n";
  }
  return out.str();
}

// Front file: "P <f1> <f2>" or "S <f1L> <f2L> <f1R> <f2R>" per element,
// sorted by f1 ascending, 12 significant digits.
inline std::string write_front(const ParetoStore& store) {
  std::ostringstream out;
  char buf[256];
  for (const Element& e : store.elements()) {
    if (e.is_point()) {
      std::snprintf(buf, sizeof(buf), "P %.12g %.12g\n", e.lo.f1, e.lo.f2);
    } else {
      std::snprintf(buf, sizeof(buf), "S %.12g %.12g %.12g %.12g\n", e.lo.f1, e.lo.f2, e.hi.f1,
                    e.hi.f2);
    }
    out << buf;
  }
  return out.str();
}

inline std::vector<Element> read_front(const std::string& text) {
  std::istringstream in(text);
  std::vector<Element> out;
  std::string kind;
  int lineno = 0;
  while (in >> kind) {
    ++lineno;
    if (kind == "P") {
      double a, b;
      if (!(in >> a >> b)) throw ParseError(lineno, "bad point line in front file");
      out.push_back(Element::point(ObjPoint{a, b}));
    } else if (kind == "S") {
      double a, b, c, d;
      if (!(in >> a >> b >> c >> d)) throw ParseError(lineno, "bad segment line in front file");
      out.push_back(Element::segment(ObjPoint{a, b}, ObjPoint{c, d}));
    } else {
      throw ParseError(lineno, "unknown front element kind '" + kind + "'");
    }
  }
  return out;
}

}  // namespace bobb

#endif  // BOBB_INSTANCE_IO_HPP
