#include "walkopt/model_export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "walkopt/errors.hpp"

namespace walkopt {

namespace {

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// MiniZinc float literals need a '.' or exponent.
std::string fmt_mzn(double v) {
  std::string s = fmt(v);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos)
    s += ".0";
  return s;
}

namespace names {
std::string y(std::size_t j, int a) { return "y_" + std::to_string(j) + "_" + std::to_string(a); }
std::string x(std::size_t i, std::size_t j, int a) {
  return "x_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(a);
}
std::string xp(std::size_t i, std::size_t j, int a, int p) {
  return "xp_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(a) + "_" +
         std::to_string(p);
}
std::string l(std::size_t i) { return "l_" + std::to_string(i); }
std::string f(std::size_t i) { return "f_" + std::to_string(i); }
std::string lam(std::size_t i, std::size_t b) {
  return "lam_" + std::to_string(i) + "_" + std::to_string(b);
}
std::string seg(std::size_t i, std::size_t s) {
  return "seg_" + std::to_string(i) + "_" + std::to_string(s);
}
}  // namespace names

void append_term(std::string& expr, double coef, const std::string& var) {
  if (coef == 0.0) return;
  if (expr.empty()) {
    if (coef == 1.0)
      expr = var;
    else if (coef == -1.0)
      expr = "- " + var;
    else
      expr = fmt(coef) + " " + var;
    return;
  }
  if (coef == 1.0)
    expr += " + " + var;
  else if (coef == -1.0)
    expr += " - " + var;
  else if (coef < 0.0)
    expr += " - " + fmt(-coef) + " " + var;
  else
    expr += " + " + fmt(coef) + " " + var;
}

class LpWriter {
 public:
  void comment(const std::string& text) { out_ += "\\ " + text + "\n"; }
  void section(const std::string& name) { out_ += name + "\n"; }
  // Emits " <content>\n", wrapping long expressions at term boundaries.
  void line(const std::string& content) {
    constexpr std::size_t kWrap = 240;
    std::string s = " " + content;
    while (s.size() > kWrap) {
      std::size_t cut = s.rfind(" + ", kWrap);
      std::size_t cut2 = s.rfind(" - ", kWrap);
      if (cut == std::string::npos || (cut2 != std::string::npos && cut2 > cut)) cut = cut2;
      if (cut == std::string::npos || cut == 0) break;
      out_ += s.substr(0, cut) + "\n";
      s = "   " + s.substr(cut);
    }
    out_ += s + "\n";
  }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

// Per-type export layout: assignable columns, available choice count, and
// the constant charged for options that can never be filled.
struct TypeExportInfo {
  std::vector<std::size_t> columns;  // candidate columns then existing columns
  int available = 0;                 // choices backed by assignment variables
  double constant = 0.0;             // sum of weight * cutoff for the rest
};

std::vector<TypeExportInfo> make_export_layout(const Instance& inst,
                                               const std::vector<std::vector<double>>& w) {
  std::vector<TypeExportInfo> out(inst.types.size());
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& spec = inst.types[t];
    TypeExportInfo info;
    for (std::size_t j = 0; j < inst.num_candidates(); ++j) info.columns.push_back(j);
    const std::size_t e0 = inst.existing_col_begin(t);
    for (std::size_t e = 0; e < inst.existing[t].size(); ++e) info.columns.push_back(e0 + e);
    const int existing_count = static_cast<int>(inst.existing[t].size());
    if (spec.is_depth()) {
      // With no candidate locations nothing can be allocated, so only the
      // existing instances are reachable choices.
      info.available = inst.num_candidates() == 0
                           ? std::min(existing_count, spec.options())
                           : available_choices(spec, existing_count);
      for (int p = info.available; p < spec.options(); ++p)
        info.constant += w[t][p] * inst.d_infinity;
    } else {
      info.available = info.columns.empty() ? 0 : 1;
      if (info.columns.empty()) info.constant = w[t][0] * inst.d_infinity;
    }
    out[t] = std::move(info);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

MilpExportSummary export_milp(const Instance& inst, const std::filesystem::path& path) {
  require_valid(inst);
  const auto weights = normalize_weights(inst.types);
  const auto layout = make_export_layout(inst, weights);
  const std::size_t n = inst.num_residents();
  const std::size_t m = inst.num_candidates();
  const auto& bp = inst.curve.breakpoints;
  const std::size_t nb = bp.size();

  MilpExportSummary sum;
  auto count = [&sum](const std::string& family) {
    ++sum.constraint_families[family];
    ++sum.constraints;
  };

  LpWriter w;
  w.comment("walkopt MILP export" + (inst.name.empty() ? "" : ": " + inst.name));
  w.comment("residents=" + std::to_string(n) + " candidates=" + std::to_string(m) +
            " types=" + std::to_string(inst.types.size()));

  w.section("Maximize");
  {
    std::string expr;
    const double c = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) append_term(expr, c, names::f(i));
    w.line("obj: " + expr);
  }

  w.section("Subject To");

  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    std::string expr;
    for (std::size_t j = 0; j < m; ++j) append_term(expr, 1.0, names::y(j, inst.types[t].id));
    if (expr.empty()) continue;
    w.line("budget_" + std::to_string(inst.types[t].id) + ": " + expr +
           " <= " + std::to_string(inst.types[t].budget));
    count("budget");
  }

  for (std::size_t j = 0; j < m; ++j) {
    std::string expr;
    for (const auto& spec : inst.types) append_term(expr, 1.0, names::y(j, spec.id));
    w.line("cap_" + std::to_string(j) + ": " + expr +
           " <= " + std::to_string(inst.candidates[j].capacity));
    count("capacity");
  }

  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& spec = inst.types[t];
    const auto& info = layout[t];
    if (info.columns.empty()) continue;
    if (!spec.is_depth()) {
      for (std::size_t i = 0; i < n; ++i) {
        std::string expr;
        for (std::size_t col : info.columns) append_term(expr, 1.0, names::x(i, col, spec.id));
        w.line("assign_" + std::to_string(i) + "_" + std::to_string(spec.id) + ": " + expr +
               " = 1");
        count("assign_plain");
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          w.line("link_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                 std::to_string(spec.id) + ": " + names::x(i, j, spec.id) + " - " +
                 names::y(j, spec.id) + " <= 0");
          count("link_plain");
        }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (int p = 0; p < info.available; ++p) {
          std::string expr;
          for (std::size_t col : info.columns)
            append_term(expr, 1.0, names::xp(i, col, spec.id, p));
          w.line("assignp_" + std::to_string(i) + "_" + std::to_string(spec.id) + "_" +
                 std::to_string(p) + ": " + expr + " = 1");
          count("assign_depth");
        }
      const std::size_t e0 = inst.existing_col_begin(t);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t e = 0; e < inst.existing[t].size(); ++e) {
          std::string expr;
          for (int p = 0; p < info.available; ++p)
            append_term(expr, 1.0, names::xp(i, e0 + e, spec.id, p));
          w.line("uniq_" + std::to_string(i) + "_" + std::to_string(e0 + e) + "_" +
                 std::to_string(spec.id) + ": " + expr + " <= 1");
          count("uniq_existing");
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          std::string expr;
          for (int p = 0; p < info.available; ++p)
            append_term(expr, 1.0, names::xp(i, j, spec.id, p));
          append_term(expr, -1.0, names::y(j, spec.id));
          w.line("alloccap_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                 std::to_string(spec.id) + ": " + expr + " <= 0");
          count("choice_capacity");
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
          for (int p = 0; p < info.available; ++p) {
            w.line("linkp_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                   std::to_string(spec.id) + "_" + std::to_string(p) + ": " +
                   names::xp(i, j, spec.id, p) + " - " + names::y(j, spec.id) + " <= 0");
            count("link_depth");
          }
    }
  }

  // l_i minus the assigned weighted distances equals the constant charged
  // for never-available options.
  double constant = 0.0;
  for (const auto& info : layout) constant += info.constant;
  for (std::size_t i = 0; i < n; ++i) {
    std::string expr = names::l(i);
    for (std::size_t t = 0; t < inst.types.size(); ++t) {
      const auto& spec = inst.types[t];
      const auto& info = layout[t];
      if (info.columns.empty()) continue;
      if (!spec.is_depth()) {
        for (std::size_t col : info.columns)
          append_term(expr, -weights[t][0] * std::min(inst.dist(i, col), inst.d_infinity),
                      names::x(i, col, spec.id));
      } else {
        for (int p = 0; p < info.available; ++p)
          for (std::size_t col : info.columns)
            append_term(expr, -weights[t][p] * std::min(inst.dist(i, col), inst.d_infinity),
                        names::xp(i, col, spec.id, p));
      }
    }
    w.line("wdist_" + std::to_string(i) + ": " + expr + " = " + fmt(constant));
    count("weighted_distance");
  }

  // Convex-combination linearization of the score curve with one binary per
  // segment; the curve is neither convex nor concave, so the binaries are
  // not optional.
  for (std::size_t i = 0; i < n; ++i) {
    {
      std::string expr = names::l(i);
      for (std::size_t b = 0; b < nb; ++b) append_term(expr, -bp[b].distance, names::lam(i, b));
      w.line("lsum_" + std::to_string(i) + ": " + expr + " = 0");
      count("pwl_link");
    }
    {
      std::string expr = names::f(i);
      for (std::size_t b = 0; b < nb; ++b) append_term(expr, -bp[b].score, names::lam(i, b));
      w.line("fsum_" + std::to_string(i) + ": " + expr + " = 0");
      count("pwl_link");
    }
    {
      std::string expr;
      for (std::size_t b = 0; b < nb; ++b) append_term(expr, 1.0, names::lam(i, b));
      w.line("lamsum_" + std::to_string(i) + ": " + expr + " = 1");
      count("pwl_link");
    }
    {
      std::string expr;
      for (std::size_t s = 0; s + 1 < nb; ++s) append_term(expr, 1.0, names::seg(i, s));
      w.line("segsum_" + std::to_string(i) + ": " + expr + " = 1");
      count("pwl_link");
    }
    for (std::size_t b = 0; b < nb; ++b) {
      std::string expr = names::lam(i, b);
      if (b > 0) append_term(expr, -1.0, names::seg(i, b - 1));
      if (b + 1 < nb) append_term(expr, -1.0, names::seg(i, b));
      w.line("adj_" + std::to_string(i) + "_" + std::to_string(b) + ": " + expr + " <= 0");
      count("pwl_link");
    }
  }

  w.section("Bounds");
  for (std::size_t j = 0; j < m; ++j)
    for (const auto& spec : inst.types)
      w.line("0 <= " + names::y(j, spec.id) + " <= " +
             std::to_string(std::min(spec.budget, inst.candidates[j].capacity)));

  if (m > 0) {
    w.section("Generals");
    std::string ints;
    for (std::size_t j = 0; j < m; ++j)
      for (const auto& spec : inst.types) {
        ints += (ints.empty() ? "" : " ") + names::y(j, spec.id);
        ++sum.integer_vars;
      }
    w.line(ints);
  }

  w.section("Binaries");
  {
    std::string bins;
    auto push = [&](const std::string& name) {
      if (!bins.empty()) bins += " ";
      bins += name;
      ++sum.binary_vars;
    };
    for (std::size_t t = 0; t < inst.types.size(); ++t) {
      const auto& spec = inst.types[t];
      const auto& info = layout[t];
      for (std::size_t i = 0; i < n; ++i) {
        if (!spec.is_depth()) {
          for (std::size_t col : info.columns) push(names::x(i, col, spec.id));
        } else {
          for (int p = 0; p < info.available; ++p)
            for (std::size_t col : info.columns) push(names::xp(i, col, spec.id, p));
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s = 0; s + 1 < nb; ++s) push(names::seg(i, s));
    w.line(bins);
  }

  w.section("End");

  sum.continuous_vars = static_cast<long>(n * (2 + nb));  // l, f, lam
  write_text_file(path, w.str());
  return sum;
}

CpExportSummary export_cp(const Instance& inst, const std::filesystem::path& path) {
  require_valid(inst);
  const auto weights = normalize_weights(inst.types);
  const auto layout = make_export_layout(inst, weights);
  const std::size_t n = inst.num_residents();
  const std::size_t m = inst.num_candidates();
  const auto& bp = inst.curve.breakpoints;

  CpExportSummary sum;
  std::ostringstream o;

  o << "% walkopt CP model export" << (inst.name.empty() ? "" : ": " + inst.name) << "\n";
  o << "% allocation slot = 0 means the instance stays unallocated (dummy"
       " location with unlimited capacity)\n";
  o << "include \"globals.mzn\";\n\n";
  o << "int: nRes = " << n << ";\n";
  o << "int: nCand = " << m << ";\n";
  o << "int: nCols = " << inst.num_columns() << ";\n";
  o << "float: Dinf = " << fmt_mzn(inst.d_infinity) << ";\n";
  if (m > 0) {
    o << "array[1..nCand] of int: cap = [";
    for (std::size_t j = 0; j < m; ++j) o << (j ? ", " : "") << inst.candidates[j].capacity;
    o << "];\n";
  }

  // Distance rows with a Dinf sentinel at column 0 so a dummy-valued slot
  // never wins a minimum; residents are never assigned to column 0.
  o << "array[1..nRes, 0..nCols] of float: D = array2d(1..nRes, 0..nCols, [\n";
  for (std::size_t i = 0; i < n; ++i) {
    o << "  Dinf";
    for (std::size_t c = 0; c < inst.num_columns(); ++c)
      o << ", " << fmt_mzn(std::min(inst.dist(i, c), inst.d_infinity));
    o << (i + 1 < n ? ",\n" : "\n");
  }
  o << "]);\n\n";

  // Allocation slots per type, value = candidate column (1-based) or 0.
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& spec = inst.types[t];
    o << "% type " << spec.id << " (" << spec.name << ")\n";
    o << "array[1.." << spec.budget << "] of var 0..nCand: y_" << spec.id << ";\n";
    sum.index_vars += spec.budget;
    if (spec.is_depth() && layout[t].available > 0) {
      const std::size_t e0 = inst.existing_col_begin(t);
      o << "set of int: ASSIGN_" << spec.id << " = 1..nCand";
      if (!inst.existing[t].empty()) {
        o << " union {";
        for (std::size_t e = 0; e < inst.existing[t].size(); ++e)
          o << (e ? ", " : "") << (e0 + e + 1);
        o << "}";
      }
      o << ";\n";
      o << "array[1..nRes, 1.." << layout[t].available << "] of var ASSIGN_" << spec.id << ": x_"
        << spec.id << ";\n";
      sum.index_vars += static_cast<long>(n) * layout[t].available;
    }
  }
  o << "\n";

  // Capacity over all allocation slots.
  if (m > 0) {
    o << "constraint forall(j in 1..nCand)(\n  ";
    bool first = true;
    for (const auto& spec : inst.types) {
      if (!first) o << " + ";
      o << "count(y_" << spec.id << ", j)";
      first = false;
    }
    o << " <= cap[j]\n);\n";
    sum.constraints += static_cast<long>(m);
  }

  // Symmetry breaking: slots of a type are ordered.
  for (const auto& spec : inst.types)
    if (spec.budget > 1) {
      o << "constraint forall(kk in 1.." << (spec.budget - 1) << ")(y_" << spec.id << "[kk] <= y_"
        << spec.id << "[kk + 1]);\n";
      sum.constraints += spec.budget - 1;
    }
  o << "\n";

  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& spec = inst.types[t];
    if (!spec.is_depth() || layout[t].available == 0) continue;
    const std::size_t e0 = inst.existing_col_begin(t);
    const int avail = layout[t].available;
    // Assignment to a candidate requires enough allocated instances there.
    o << "constraint forall(i in 1..nRes, j in 1..nCand)(\n"
      << "  count([x_" << spec.id << "[i, p] | p in 1.." << avail << "], j) <= count(y_" << spec.id
      << ", j)\n);\n";
    sum.constraints += static_cast<long>(n) * m;
    // An existing instance can appear only once among the choices.
    if (!inst.existing[t].empty()) {
      o << "constraint forall(i in 1..nRes, j in {";
      for (std::size_t e = 0; e < inst.existing[t].size(); ++e) o << (e ? ", " : "") << (e0 + e + 1);
      o << "})(\n  count([x_" << spec.id << "[i, p] | p in 1.." << avail << "], j) <= 1\n);\n";
      sum.constraints += static_cast<long>(n) * inst.existing[t].size();
    }
    // Assignment implies allocation.
    o << "constraint forall(j in 1..nCand)(\n"
      << "  exists(i in 1..nRes, p in 1.." << avail << ")(x_" << spec.id
      << "[i, p] = j) -> count(y_" << spec.id << ", j) >= 1\n);\n";
    sum.constraints += static_cast<long>(m);
  }
  o << "\n";

  // Weighted distance per resident.
  o << "array[1..nRes] of var 0.0.." << fmt_mzn(inst.d_infinity * 1.01) << ": l;\n";
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& spec = inst.types[t];
    if (spec.is_depth() || layout[t].columns.empty() || inst.existing[t].empty()) continue;
    const std::size_t e0 = inst.existing_col_begin(t);
    o << "array[1..nRes] of float: existMin_" << spec.id << " = [";
    for (std::size_t i = 0; i < n; ++i) {
      double best = inst.d_infinity;
      for (std::size_t e = 0; e < inst.existing[t].size(); ++e)
        best = std::min(best, std::min(inst.dist(i, e0 + e), inst.d_infinity));
      o << (i ? ", " : "") << fmt_mzn(best);
    }
    o << "];\n";
  }
  o << "constraint forall(i in 1..nRes)(\n  l[i] = ";
  {
    bool first = true;
    double constant = 0.0;
    for (const auto& info : layout) constant += info.constant;
    for (std::size_t t = 0; t < inst.types.size(); ++t) {
      const auto& spec = inst.types[t];
      const auto& info = layout[t];
      if (info.columns.empty()) continue;
      if (!first) o << "\n       + ";
      first = false;
      if (!spec.is_depth()) {
        o << fmt_mzn(weights[t][0]) << " * min([D[i, y_" << spec.id << "[kk]] | kk in 1.."
          << spec.budget << "]";
        if (!inst.existing[t].empty())
          o << " ++ [existMin_" << spec.id << "[i]]";
        else
          o << " ++ [Dinf]";
        o << ")";
      } else {
        for (int p = 0; p < info.available; ++p) {
          if (p > 0) o << " + ";
          o << fmt_mzn(weights[t][p]) << " * D[i, x_" << spec.id << "[i, " << (p + 1) << "]]";
        }
      }
    }
    if (constant != 0.0 || first) o << (first ? "" : "\n       + ") << fmt_mzn(constant);
  }
  o << "\n);\n\n";
  sum.constraints += static_cast<long>(n);
  sum.continuous_vars += static_cast<long>(n);

  // Score curve by segment selection; a final zero-slope tail keeps the
  // domain closed for weighted distances at the cutoff.
  const std::size_t base_segs = bp.size() - 1;
  const std::size_t nseg = base_segs + 1;
  o << "int: nSeg = " << nseg << ";\n";
  o << "array[1..nSeg] of float: segLo = [";
  for (std::size_t s = 0; s < base_segs; ++s) o << fmt_mzn(bp[s].distance) << ", ";
  o << fmt_mzn(bp.back().distance) << "];\n";
  o << "array[1..nSeg] of float: segHi = [";
  for (std::size_t s = 0; s < base_segs; ++s) o << fmt_mzn(bp[s + 1].distance) << ", ";
  o << fmt_mzn(inst.d_infinity * 1.01) << "];\n";
  o << "array[1..nSeg] of float: segScore = [";
  for (std::size_t s = 0; s < base_segs; ++s) o << fmt_mzn(bp[s].score) << ", ";
  o << fmt_mzn(bp.back().score) << "];\n";
  o << "array[1..nSeg] of float: segSlope = [";
  for (std::size_t s = 0; s < base_segs; ++s)
    o << fmt_mzn((bp[s + 1].score - bp[s].score) / (bp[s + 1].distance - bp[s].distance)) << ", ";
  o << "0.0];\n";
  o << "array[1..nRes] of var 0.0..100.0: f;\n";
  o << "array[1..nRes, 1..nSeg] of var bool: seg;\n";
  o << "constraint forall(i in 1..nRes)(sum(s in 1..nSeg)(seg[i, s]) = 1);\n";
  o << "constraint forall(i in 1..nRes, s in 1..nSeg)(\n"
    << "  seg[i, s] -> (l[i] >= segLo[s] /\\ l[i] <= segHi[s])\n);\n";
  o << "constraint forall(i in 1..nRes, s in 1..nSeg)(\n"
    << "  seg[i, s] -> (f[i] = segScore[s] + segSlope[s] * (l[i] - segLo[s]))\n);\n";
  sum.constraints += static_cast<long>(n) * (1 + 2 * nseg);
  sum.segment_vars += static_cast<long>(n * nseg);
  sum.continuous_vars += static_cast<long>(2 * n);  // f and the objective

  o << "\nvar float: objective = sum(i in 1..nRes)(f[i]) / int2float(nRes);\n";
  o << "solve maximize objective;\n\n";

  o << "output [\"objective \\(objective)\\n\"]";
  if (m > 0) {
    for (const auto& spec : inst.types)
      o << "\n    ++ [\"y_\\(j - 1)_" << spec.id << " \\(count(y_" << spec.id
        << ", j))\\n\" | j in 1..nCand]";
  }
  o << ";\n";

  write_text_file(path, o.str());
  return sum;
}

namespace {

bool parse_index(const std::string& tok, long& out) {
  if (tok.empty()) return false;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

struct ParsedVar {
  std::string kind;
  std::vector<long> idx;
};

// Validates a solution-file variable name against the naming scheme and the
// instance dimensions; throws ParseError naming the token otherwise.
ParsedVar parse_var_name(const std::string& name, const Instance& inst) {
  auto fail = [&]() -> ParsedVar {
    throw ParseError("unknown variable name '" + name + "'");
  };
  auto tokens = split(name, '_');
  if (tokens.empty()) return fail();
  ParsedVar v;
  v.kind = tokens[0];
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    long value = 0;
    if (!parse_index(tokens[k], value) || value < 0) return fail();
    v.idx.push_back(value);
  }
  const long n = static_cast<long>(inst.num_residents());
  const long m = static_cast<long>(inst.num_candidates());
  const long cols = static_cast<long>(inst.num_columns());
  const long nb = static_cast<long>(inst.curve.breakpoints.size());
  auto valid_type = [&](long a) { return inst.type_index_of(static_cast<int>(a)) >= 0; };
  auto column_of_type = [&](long col, long a) {
    if (col < m) return true;
    const std::size_t t = static_cast<std::size_t>(inst.type_index_of(static_cast<int>(a)));
    const long b = static_cast<long>(inst.existing_col_begin(t));
    return col >= b && col < b + static_cast<long>(inst.existing[t].size());
  };
  if (v.kind == "y") {
    if (v.idx.size() != 2 || v.idx[0] >= m || !valid_type(v.idx[1])) return fail();
  } else if (v.kind == "x") {
    if (v.idx.size() != 3 || v.idx[0] >= n || v.idx[1] >= cols || !valid_type(v.idx[2]) ||
        !column_of_type(v.idx[1], v.idx[2]))
      return fail();
  } else if (v.kind == "xp") {
    if (v.idx.size() != 4 || v.idx[0] >= n || v.idx[1] >= cols || !valid_type(v.idx[2]) ||
        !column_of_type(v.idx[1], v.idx[2]))
      return fail();
    const auto& spec = inst.types[inst.type_index_of(static_cast<int>(v.idx[2]))];
    if (v.idx[3] >= spec.options()) return fail();
  } else if (v.kind == "l" || v.kind == "f") {
    if (v.idx.size() != 1 || v.idx[0] >= n) return fail();
  } else if (v.kind == "lam") {
    if (v.idx.size() != 2 || v.idx[0] >= n || v.idx[1] >= nb) return fail();
  } else if (v.kind == "seg") {
    if (v.idx.size() != 2 || v.idx[0] >= n || v.idx[1] >= nb - 1) return fail();
  } else if (v.kind == "objective") {
    if (!v.idx.empty()) return fail();
  } else {
    return fail();
  }
  return v;
}

}  // namespace

ImportedSolution import_solution(const Instance& inst, const std::filesystem::path& model_path,
                                 const std::filesystem::path& solution_path) {
  std::ifstream model(model_path);
  if (!model) throw ParseError("cannot open " + model_path.string());
  std::string model_text((std::istreambuf_iterator<char>(model)),
                         std::istreambuf_iterator<char>());

  std::ifstream sol(solution_path);
  if (!sol) throw ParseError("cannot open " + solution_path.string());

  ImportedSolution out;
  Allocation alloc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(sol, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == '#' || first[0] == '\\' || first[0] == '%') {
      // Comment; look for a reported objective value.
      auto lower = line;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      auto pos = lower.find("objective");
      if (pos != std::string::npos) {
        for (std::size_t k = pos + 9; k < line.size(); ++k) {
          if (std::isdigit(static_cast<unsigned char>(line[k])) || line[k] == '-' ||
              line[k] == '+') {
            out.reported_objective = std::stod(line.substr(k));
            break;
          }
        }
      }
      continue;
    }
    std::string value_tok, extra;
    if (!(ls >> value_tok) || (ls >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected 'name value'");
    ParsedVar var = parse_var_name(first, inst);
    if (model_text.find(first) == std::string::npos && var.kind != "objective")
      throw ParseError("variable '" + first + "' does not appear in " + model_path.string());
    double value = 0.0;
    try {
      value = std::stod(value_tok);
    } catch (...) {
      throw ParseError("line " + std::to_string(lineno) + ": bad value '" + value_tok + "'");
    }
    if (var.kind == "objective") {
      out.reported_objective = value;
    } else if (var.kind == "y") {
      double rounded = std::round(value);
      if (std::abs(value - rounded) > 1e-4 || rounded < -1e-4)
        throw ParseError("variable '" + first + "' has non-integral value " + value_tok);
      if (rounded > 0)
        alloc.add(static_cast<int>(var.idx[1]), static_cast<int>(var.idx[0]),
                  static_cast<int>(rounded));
    }
  }

  check_feasible(inst, alloc);
  out.allocation = alloc;
  out.reevaluated_objective = objective(inst, alloc).first;
  out.discrepancy = out.reported_objective
                        ? std::abs(*out.reported_objective - out.reevaluated_objective)
                        : 0.0;
  return out;
}

}  // namespace walkopt
