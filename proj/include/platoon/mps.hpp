#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "platoon/error.hpp"
#include "platoon/model.hpp"

namespace platoon {

namespace detail {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string mps_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

/// One fixed-format data line. Fields start at columns 2, 5, 15, 25, 40, 50;
/// a field longer than its slot pushes the rest right and stays separated by
/// at least one blank.
inline std::string mps_line(std::string_view f1, std::string_view f2, std::string_view f3 = {},
                            std::string_view f4 = {}, std::string_view f5 = {},
                            std::string_view f6 = {}) {
  static constexpr std::size_t start[] = {1, 4, 14, 24, 39, 49};
  const std::string_view fields[] = {f1, f2, f3, f4, f5, f6};
  std::string line;
  for (int i = 0; i < 6; ++i) {
    if (fields[i].empty()) continue;
    if (line.size() < start[i])
      line = pad(std::move(line), start[i]);
    else if (!line.empty())
      line += ' ';
    line += fields[i];
  }
  return line;
}

}  // namespace detail

inline constexpr const char* kObjectiveRow = "COST";

/// Fixed-format MPS text of a model.
inline std::string write_mps(const MilpModel& m) {
  using detail::mps_line;
  using detail::mps_number;
  std::ostringstream out;
  out << "NAME          " << m.name << "\n";
  out << "ROWS\n";
  out << mps_line("N", kObjectiveRow) << "\n";
  for (const Constraint& c : m.rows) {
    const char* s = c.sense == Sense::le ? "L" : c.sense == Sense::ge ? "G" : "E";
    out << mps_line(s, c.name) << "\n";
  }

  std::vector<std::vector<std::pair<std::string_view, double>>> cols(m.vars.size());
  for (const Term& t : m.objective) cols[t.var].emplace_back(kObjectiveRow, t.coef);
  for (const Constraint& c : m.rows)
    for (const Term& t : c.terms) cols[t.var].emplace_back(c.name, t.coef);

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t v = 0; v < m.vars.size(); ++v) {
    const bool is_int = m.vars[v].kind == VarKind::binary;
    if (is_int != in_int) {
      const std::string name = "MARKER" + std::to_string(marker++);
      out << mps_line("", name, "'MARKER'", "", is_int ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = is_int;
    }
    const std::string& name = m.vars[v].name;
    if (cols[v].empty()) {
      out << mps_line("", name, kObjectiveRow, "0") << "\n";
      continue;
    }
    for (std::size_t e = 0; e < cols[v].size(); e += 2) {
      const auto& a = cols[v][e];
      if (e + 1 < cols[v].size()) {
        const auto& b = cols[v][e + 1];
        out << mps_line("", name, a.first, mps_number(a.second), b.first, mps_number(b.second)) << "\n";
      } else {
        out << mps_line("", name, a.first, mps_number(a.second)) << "\n";
      }
    }
  }
  if (in_int)
    out << mps_line("", "MARKER" + std::to_string(marker), "'MARKER'", "", "'INTEND'") << "\n";

  out << "RHS\n";
  for (const Constraint& c : m.rows)
    if (c.rhs != 0.0) out << mps_line("", "RHS", c.name, mps_number(c.rhs)) << "\n";

  out << "BOUNDS\n";
  for (const Variable& v : m.vars) {
    if (v.kind == VarKind::binary && v.lower == 0.0 && v.upper == 1.0) {
      out << mps_line("BV", "BND", v.name) << "\n";
      continue;
    }
    const bool free_lo = v.lower == -kInf, free_hi = v.upper == kInf;
    if (free_lo && free_hi) {
      out << mps_line("FR", "BND", v.name) << "\n";
      continue;
    }
    if (v.lower == v.upper) {
      out << mps_line("FX", "BND", v.name, mps_number(v.lower)) << "\n";
      continue;
    }
    if (free_lo)
      out << mps_line("MI", "BND", v.name) << "\n";
    else if (v.lower != 0.0 || v.kind == VarKind::binary)
      out << mps_line("LO", "BND", v.name, mps_number(v.lower)) << "\n";
    if (!free_hi) out << mps_line("UP", "BND", v.name, mps_number(v.upper)) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

inline void export_mps(const MilpModel& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << write_mps(m);
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

namespace detail {

inline double parse_mps_number(std::string_view tok, int line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("MPS: bad number '" + std::string(tok) + "'", line, 0);
  return v;
}

}  // namespace detail

/// Reads MPS text (fixed or free layout) back into a model. Integer columns
/// inside MARKER blocks with 0/1 bounds come back as binary.
inline MilpModel parse_mps(std::string_view text) {
  MilpModel m;
  enum class Section { none, rows, columns, rhs, bounds, done } section = Section::none;
  std::string objective_row;
  std::map<std::string, int, std::less<>> row_index;
  std::vector<std::map<int, double>> row_terms;
  std::map<int, double> obj;
  std::vector<bool> integer;
  bool in_int = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size() && section != Section::done) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '*') continue;

    std::vector<std::string_view> tok;
    for (std::size_t i = 0; i < line.size();) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      const std::size_t s = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > s) tok.push_back(line.substr(s, i - s));
    }
    if (tok.empty()) continue;

    if (line.front() != ' ' && line.front() != '\t') {
      const std::string_view head = tok[0];
      if (head == "NAME") m.name = tok.size() > 1 ? std::string(tok[1]) : "";
      else if (head == "ROWS") section = Section::rows;
      else if (head == "COLUMNS") section = Section::columns;
      else if (head == "RHS") section = Section::rhs;
      else if (head == "BOUNDS") section = Section::bounds;
      else if (head == "ENDATA") section = Section::done;
      else if (head == "RANGES" || head == "OBJSENSE")
        throw ParseError("MPS: section " + std::string(head) + " is not supported", line_no, 1);
      else throw ParseError("MPS: unknown section " + std::string(head), line_no, 1);
      continue;
    }

    auto row_of = [&](std::string_view name) -> int {
      if (name == objective_row) return -1;
      auto it = row_index.find(name);
      if (it == row_index.end())
        throw ParseError("MPS: unknown row " + std::string(name), line_no, 0);
      return it->second;
    };

    switch (section) {
      case Section::rows: {
        if (tok.size() != 2) throw ParseError("MPS: malformed ROWS line", line_no, 0);
        const std::string name(tok[1]);
        if (tok[0] == "N") {
          if (objective_row.empty()) objective_row = name;
          break;
        }
        Sense s;
        if (tok[0] == "L") s = Sense::le;
        else if (tok[0] == "G") s = Sense::ge;
        else if (tok[0] == "E") s = Sense::eq;
        else throw ParseError("MPS: bad row type " + std::string(tok[0]), line_no, 0);
        row_index.emplace(name, static_cast<int>(m.rows.size()));
        m.rows.push_back({name, {}, s, 0.0});
        row_terms.emplace_back();
        break;
      }
      case Section::columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          const std::string_view kind = tok.back();
          if (kind == "'INTORG'") in_int = true;
          else if (kind == "'INTEND'") in_int = false;
          else throw ParseError("MPS: bad marker", line_no, 0);
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) throw ParseError("MPS: malformed COLUMNS line", line_no, 0);
        const std::string name(tok[0]);
        auto id = m.find(name);
        if (!id) {
          id = m.add_var(name, in_int ? VarKind::binary : VarKind::continuous, 0.0,
                         in_int ? 1.0 : kInf);
          integer.push_back(in_int);
        } else if (*id != static_cast<int>(m.vars.size()) - 1) {
          throw ParseError("MPS: column " + name + " is not contiguous", line_no, 0);
        }
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const int r = row_of(tok[f]);
          const double v = detail::parse_mps_number(tok[f + 1], line_no);
          if (r < 0) {
            if (v != 0.0) obj[*id] += v;
          } else {
            row_terms[r][*id] += v;
          }
        }
        break;
      }
      case Section::rhs: {
        if (tok.size() != 3 && tok.size() != 5) throw ParseError("MPS: malformed RHS line", line_no, 0);
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const int r = row_of(tok[f]);
          if (r >= 0) m.rows[r].rhs = detail::parse_mps_number(tok[f + 1], line_no);
        }
        break;
      }
      case Section::bounds: {
        if (tok.size() < 3) throw ParseError("MPS: malformed BOUNDS line", line_no, 0);
        const std::string_view type = tok[0];
        const auto id = m.find(std::string(tok[2]));
        if (!id) throw ParseError("MPS: bound on unknown column " + std::string(tok[2]), line_no, 0);
        Variable& v = m.vars[*id];
        auto value = [&] {
          if (tok.size() < 4) throw ParseError("MPS: bound needs a value", line_no, 0);
          return detail::parse_mps_number(tok[3], line_no);
        };
        if (type == "BV") {
          v.kind = VarKind::binary;
          v.lower = 0.0;
          v.upper = 1.0;
        } else if (type == "UP") {
          v.upper = value();
        } else if (type == "LO") {
          v.lower = value();
        } else if (type == "FX") {
          v.lower = v.upper = value();
        } else if (type == "FR") {
          v.lower = -kInf;
          v.upper = kInf;
        } else if (type == "MI") {
          v.lower = -kInf;
        } else if (type == "PL") {
          v.upper = kInf;
        } else {
          throw ParseError("MPS: unsupported bound type " + std::string(type), line_no, 0);
        }
        break;
      }
      default:
        throw ParseError("MPS: data outside a section", line_no, 0);
    }
  }
  if (section != Section::done) throw ParseError("MPS: missing ENDATA", line_no, 0);

  for (std::size_t r = 0; r < m.rows.size(); ++r)
    for (auto [v, c] : row_terms[r]) m.rows[r].terms.push_back({v, c});
  for (auto [v, c] : obj) m.objective.push_back({v, c});
  return m;
}

}  // namespace platoon
