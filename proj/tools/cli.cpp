#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "boxcells/basis_reduction.hpp"
#include "boxcells/cells.hpp"
#include "boxcells/generators.hpp"
#include "boxcells/geometry.hpp"
#include "boxcells/lattice_count.hpp"
#include "boxcells/linear_program.hpp"
#include "boxcells/parallel.hpp"
#include "boxcells/report.hpp"

namespace boxcells::cli {

namespace {

struct Options {
  std::optional<int> dim;
  std::optional<std::int64_t> n;
  std::string normal;
  std::string t;
  std::string width;
  std::optional<std::int64_t> zmax;
  std::string ns;
  std::uint64_t seed = 0;
  std::optional<int> samples;
  std::optional<int> cases;
  std::optional<int> starts;
  std::string format = "json";
  std::string out;
  std::string body;
  std::string center;
  std::string radius;
  std::string rows;
  std::string vertices;
  std::string interior;
  std::string lower;
  std::string upper;
  std::string cell;
  std::string basis;
  std::string factor;
};

struct Report {
  Json result = Json::object();
  std::vector<std::string> warnings;
  std::optional<std::string> csv;  // set by commands that have a CSV schema
};

struct SuiteRow {
  std::string case_id;
  bool ok = false;
  std::string details;
};

using Handler = std::function<Report(const Options&)>;

struct Command {
  std::string name;
  std::string description;
  std::vector<std::string> flags;
  Handler handler;
};

// ---- input helpers ----

bool is_decimal(const std::string& text) { return text.find_first_of(".eE") != std::string::npos; }

const std::string& required(const std::string& value, const char* flag) {
  if (value.empty()) throw PreconditionError(std::string("missing --") + flag);
  return value;
}

template <typename T>
T required(const std::optional<T>& value, const char* flag) {
  if (!value) throw PreconditionError(std::string("missing --") + flag);
  return *value;
}

VecZ parse_int_vector(const std::string& text) {
  const std::vector<std::int64_t> items = parse_int_list(text);
  VecZ v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v[static_cast<Eigen::Index>(i)] = items[i];
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(part);
  return parts;
}

MatQ parse_rational_matrix(const std::string& text) {
  std::vector<VecQ> rows;
  for (const auto& part : split(text, ';')) rows.push_back(parse_rational_list(part));
  if (rows.empty()) throw PreconditionError("empty matrix");
  MatQ m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw PreconditionError("matrix rows differ in length");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

MatZ parse_int_matrix(const std::string& text) {
  std::vector<VecZ> rows;
  for (const auto& part : split(text, ';')) rows.push_back(parse_int_vector(part));
  MatZ m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw PreconditionError("matrix rows differ in length");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

// Deepest point of {a.x <= b}: maximize s with a.x + |a|_1 s <= b, s <= 1.
VecQ polytope_interior(const MatQ& normals, const VecQ& offsets) {
  const Eigen::Index m = normals.rows();
  const Eigen::Index d = normals.cols();
  MatQ A = MatQ::Zero(m + 1, d + 1);
  VecQ b(m + 1);
  for (Eigen::Index r = 0; r < m; ++r) {
    A.block(r, 0, 1, d) = normals.row(r);
    Rational norm(0);
    for (Eigen::Index j = 0; j < d; ++j) norm += abs(normals(r, j));
    A(r, d) = norm;
    b[r] = offsets[r];
  }
  A(m, d) = 1;
  b[m] = 1;
  VecQ c = VecQ::Zero(d + 1);
  c[d] = 1;
  const LpResult lp = maximize_free(A, b, c);
  if (lp.status != LpStatus::optimal || !(lp.value > 0)) throw PreconditionError("polytope has empty interior");
  return lp.x.head(d);
}

ConvexBody make_body(const Options& o) {
  const std::string& kind = required(o.body, "body");
  if (kind == "ball") {
    const VecX center = to_double(parse_rational_list(required(o.center, "center")));
    return make_ball(center, to_double(parse_rational(required(o.radius, "radius"))));
  }
  if (kind == "poly") {
    const MatQ rows = parse_rational_matrix(required(o.rows, "rows"));
    if (rows.cols() < 2) throw PreconditionError("each row needs a normal and an offset");
    const MatQ normals = rows.leftCols(rows.cols() - 1);
    const VecQ offsets = rows.col(rows.cols() - 1);
    VecQ interior = o.interior.empty() ? polytope_interior(normals, offsets) : parse_rational_list(o.interior);
    return HPolytope(normals, offsets, interior);
  }
  if (kind == "simplex") {
    const MatQ points = parse_rational_matrix(required(o.vertices, "vertices"));
    std::vector<VecQ> vertices;
    for (Eigen::Index r = 0; r < points.rows(); ++r) vertices.push_back(points.row(r).transpose());
    return HPolytope::simplex(vertices);
  }
  if (kind == "slab") {
    return make_slab_box(parse_rational_list(required(o.normal, "normal")), parse_rational(required(o.lower, "lower")),
                         parse_rational(required(o.upper, "upper")), required(o.n, "n"));
  }
  if (kind == "cube") {
    const int dim = required(o.dim, "dim");
    const std::int64_t side = required(o.n, "n");
    if (dim < 1 || side < 1) throw PreconditionError("cube needs dim >= 1 and n >= 1");
    return HPolytope::box(VecQ::Zero(dim), VecQ::Constant(dim, Rational(side)));
  }
  throw PreconditionError("unknown body kind '" + kind + "' (ball, poly, simplex, slab, cube)");
}

SlabBox make_slab(const Options& o) {
  const ConvexBody body = make_body(o);
  if (!std::holds_alternative<SlabBox>(body)) throw PreconditionError("this command needs --body slab");
  return std::get<SlabBox>(body);
}

std::string csv_suite(const std::vector<SuiteRow>& rows) {
  std::string text = "case_id,ok,details\n";
  for (const auto& r : rows) text += r.case_id + "," + (r.ok ? "true" : "false") + "," + r.details + "\n";
  return text;
}

Json json_rows(const std::vector<SuiteRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back({{"case_id", r.case_id}, {"ok", r.ok}, {"details", r.details}});
  return out;
}

std::string fmt_num(double x) { return format_double(x); }

// ---- commands ----

Report cmd_slice_vol(const Options& o) {
  Report r;
  const std::string& normal = required(o.normal, "normal");
  const std::string& t = required(o.t, "t");
  const std::int64_t side = o.n.value_or(1);
  if (is_decimal(normal) || is_decimal(t)) {
    r.warnings.push_back("decimal input evaluated in floating point");
    const VecX v = to_double(parse_rational_list(normal));
    r.result["volume"] = to_json(slice_volume<double>(v, to_double(parse_rational(t)), static_cast<double>(side)));
    return r;
  }
  const VecQ v = parse_rational_list(normal);
  const Rational density = slice_density<Rational>(v, parse_rational(t), Rational(side));
  r.result["density"] = to_json(density);
  r.result["volume"] = to_json(to_double(v).norm() * to_double(density));
  return r;
}

Report cmd_strip_vol(const Options& o) {
  Report r;
  const std::string& normal = required(o.normal, "normal");
  const std::string& t = required(o.t, "t");
  const std::string& width = required(o.width, "width");
  const std::int64_t side = o.n.value_or(1);
  if (is_decimal(normal) || is_decimal(t) || is_decimal(width)) {
    r.warnings.push_back("decimal input evaluated in floating point");
    const Slab<double> slab{to_double(parse_rational_list(normal)), to_double(parse_rational(t)),
                            to_double(parse_rational(width))};
    r.result["volume"] = to_json(strip_volume<double>(slab, static_cast<double>(side)));
    return r;
  }
  const Slab<Rational> slab{parse_rational_list(normal), parse_rational(t), parse_rational(width)};
  const Rational volume = strip_volume<Rational>(slab, Rational(side));
  r.result["volume_exact"] = to_json(volume);
  r.result["volume"] = to_json(to_double(volume));
  return r;
}

Report cmd_vd(const Options& o) {
  Report r;
  if (!o.normal.empty()) {
    if (is_decimal(o.normal)) {
      r.warnings.push_back("decimal input evaluated in floating point");
      r.result["value"] = to_json(vd_of_direction<double>(to_double(parse_rational_list(o.normal))));
      return r;
    }
    const Rational value = vd_of_direction<Rational>(parse_rational_list(o.normal));
    r.result["exact"] = to_json(value);
    r.result["value"] = to_json(to_double(value));
    return r;
  }
  const Rational value = vd_of_ones(required(o.dim, "dim"));
  r.result["exact"] = to_json(value);
  r.result["value"] = to_json(to_double(value));
  return r;
}

Report cmd_vd_max(const Options& o) {
  Report r;
  VdMaxOptions options;
  options.seed = o.seed;
  if (o.starts) options.starts = *o.starts;
  const VdMaxResult best = vd_max(required(o.dim, "dim"), options);
  r.result = {{"direction", to_json(best.direction)},
              {"value", to_json(best.value)},
              {"converged", best.converged},
              {"converged_starts", best.converged_starts},
              {"evaluations", best.evaluations}};
  return r;
}

Report cmd_levels(const Options& o) {
  Report r;
  const LevelCounts levels = level_counts(parse_int_vector(required(o.normal, "normal")), required(o.n, "n"));
  Json counts = Json::array();
  std::string csv = "h,count\n";
  for (std::size_t i = 0; i < levels.counts.size(); ++i) {
    counts.push_back(to_json(levels.counts[i]));
    csv += std::to_string(levels.hmin + static_cast<std::int64_t>(i)) + "," + to_string(levels.counts[i]) + "\n";
  }
  r.result = {{"hmin", levels.hmin}, {"hmax", levels.hmax()}, {"counts", counts}, {"total", to_json(levels.total())}};
  r.csv = csv;
  return r;
}

Report cmd_slabmax(const Options& o) {
  Report r;
  const LatticeDirection z = normalize_primitive(parse_int_vector(required(o.normal, "normal")));
  const WindowMax best = strip_count_max(z, required(o.n, "n"));
  r.result = {{"normal", to_json(z.z)}, {"count", to_json(best.count)}, {"k", best.k}, {"width", best.width}};
  return r;
}

Report cmd_search(const Options& o) {
  Report r;
  const SearchResult best = best_direction_search(required(o.dim, "dim"), required(o.n, "n"), required(o.zmax, "zmax"));
  r.result = {{"normal", to_json(best.best.z)},
              {"count", to_json(best.count)},
              {"k", best.window.k},
              {"candidates", best.candidates}};
  return r;
}

Report cmd_nd_exact(const Options& o) {
  Report r;
  const std::int64_t n = required(o.n, "n");
  const int dim = o.dim.value_or(2);
  r.result = {{"dim", dim}, {"n", n}, {"count", to_json(exact_nd_small(dim, n, o.zmax.value_or(n)))}};
  return r;
}

Report cmd_convergence(const Options& o) {
  Report r;
  const LatticeDirection z = normalize_primitive(parse_int_vector(required(o.normal, "normal")));
  const std::vector<std::int64_t> ns = parse_int_list(required(o.ns, "ns"));
  Json rows = Json::array();
  std::string csv = "n,M,ratio,V,gap\n";
  for (const ConvergenceRow& row : convergence_table(z, ns)) {
    rows.push_back({{"n", row.n},
                    {"M", to_json(row.count)},
                    {"ratio", to_json(row.ratio)},
                    {"V", to_json(row.vd)},
                    {"V_exact", to_json(row.vd_exact)},
                    {"gap", to_json(row.gap)}});
    csv += std::to_string(row.n) + "," + to_string(row.count) + "," + fmt_num(row.ratio) + "," + fmt_num(row.vd) +
           "," + fmt_num(row.gap) + "\n";
  }
  r.result = {{"normal", to_json(z.z)}, {"rows", rows}};
  r.csv = csv;
  return r;
}

Report cmd_cells_classify(const Options& o) {
  Report r;
  const ConvexBody body = make_body(o);
  const VecZ cell = parse_int_vector(required(o.cell, "cell"));
  r.result = {{"body", body_json(body)}, {"cell", to_json(cell)}, {"class", to_string(classify_cell(body, cell))}};
  return r;
}

Report cmd_cells_count(const Options& o) {
  Report r;
  const ConvexBody body = make_body(o);
  const ClassCounts counts = count_cells(body);
  bool ok = false;
  if (counts.exact_volume) ok = abs(*counts.exact_volume - Rational(counts.lattice)) <= Rational(counts.boundary);
  else if (counts.volume) ok = std::abs(*counts.volume - to_double(counts.lattice)) <= to_double(counts.boundary);
  r.result = cell_report(body, counts, ok);
  return r;
}

Report cmd_check_elem(const Options& o) {
  Report r;
  if (!o.body.empty()) {
    const ConvexBody body = make_body(o);
    const VolumeGap gap = check_volume_gap(body);
    r.result = cell_report(body, gap.counts, gap.ok);
    r.result["gap"] = to_json(gap.gap);
    return r;
  }
  const int cases = o.cases.value_or(200);
  std::vector<SuiteRow> rows(static_cast<std::size_t>(std::max(cases, 0)));
  parallel_for(rows.size(), [&](std::size_t i) {
    Rng rng = case_rng(o.seed, i);
    const NamedBody body = random_exact_body(rng);
    const VolumeGap gap = check_volume_gap(body.body);
    rows[i] = {std::to_string(i), gap.ok,
               "kind=" + body.kind + ";d=" + std::to_string(dimension(body.body)) + ";gap=" + fmt_num(gap.gap) +
                   ";boundary=" + to_string(gap.boundary)};
  });
  const auto passed = std::count_if(rows.begin(), rows.end(), [](const SuiteRow& x) { return x.ok; });
  r.result = {{"cases", cases}, {"passed", passed}, {"rows", json_rows(rows)}};
  r.csv = csv_suite(rows);
  return r;
}

Report cmd_check_monotone(const Options& o) {
  Report r;
  if (!o.body.empty()) {
    const ConvexBody outer = make_body(o);
    const Rational factor = parse_rational(required(o.factor, "factor"));
    if (!(factor > 0 && factor <= 1)) throw PreconditionError("--factor must lie in (0, 1]");
    const ConvexBody inner = shrink_about(outer, interior_point(outer), factor);
    const BoundaryMonotonicity m = check_boundary_monotonicity(inner, outer, o.samples.value_or(2000), o.seed);
    r.result = {{"inner_boundary", to_json(m.inner_boundary)}, {"outer_boundary", to_json(m.outer_boundary)}, {"ok", m.ok}};
    return r;
  }
  const int cases = o.cases.value_or(200);
  std::vector<SuiteRow> rows(static_cast<std::size_t>(std::max(cases, 0)));
  parallel_for(rows.size(), [&](std::size_t i) {
    Rng rng = case_rng(o.seed, i);
    const NestedPair pair = random_nested_pair(rng);
    const BoundaryMonotonicity m = check_boundary_monotonicity(pair.inner, pair.outer, o.samples.value_or(2000), o.seed + i);
    rows[i] = {std::to_string(i), m.ok,
               "kind=" + pair.kind + ";factor=" + to_string(pair.factor) + ";inner=" + to_string(m.inner_boundary) +
                   ";outer=" + to_string(m.outer_boundary)};
  });
  const auto passed = std::count_if(rows.begin(), rows.end(), [](const SuiteRow& x) { return x.ok; });
  r.result = {{"cases", cases}, {"passed", passed}, {"rows", json_rows(rows)}};
  r.csv = csv_suite(rows);
  return r;
}

Report cmd_mainK(const Options& o) {
  Report r;
  const int dim = o.dim.value_or(2);
  const std::int64_t n = o.n.value_or(300);
  if (dim < 2 || n < 1) throw PreconditionError("mainK-experiment needs dim >= 2 and n >= 1");
  const VecZ normal = o.normal.empty() ? VecZ(VecZ::Ones(dim)) : parse_int_vector(o.normal);
  const Ball disk = make_ball(VecX::Zero(dim), static_cast<double>(n));
  const BodyHyperplaneMax best = best_hyperplane_cells_in_body(disk, normal);
  const double unit_v = v_of_body(make_ball(VecX::Zero(dim), 1.0), 0, 0).value;
  const double scale = std::pow(static_cast<double>(n), dim - 1);
  const double estimate = to_double(best.count) / scale;
  const VecX v = normal.cast<double>();
  const double direction_v = v.lpNorm<1>() / v.norm() * ball_volume(dim - 1, 1.0);
  r.result = {{"dim", dim},
              {"n", n},
              {"normal", to_json(normal)},
              {"count", to_json(best.count)},
              {"t", to_json(best.t)},
              {"estimate", to_json(estimate)},
              {"V", to_json(unit_v)},
              {"V_direction", to_json(direction_v)},
              {"relative_error", to_json(std::abs(estimate - unit_v) / unit_v)}};
  return r;
}

std::vector<int> suite_dims(const Options& o) {
  if (o.dim) return {*o.dim};
  return {2, 3, 4};
}

Report cmd_basis_reduce(const Options& o) {
  Report r;
  if (!o.body.empty()) {
    r.result = basis_report(well_position(make_slab(o)));
    return r;
  }
  const int cases = o.cases.value_or(50);
  std::vector<SuiteRow> rows;
  Json summary = Json::object();
  for (int dim : suite_dims(o)) {
    std::vector<SuiteRow> part(static_cast<std::size_t>(std::max(cases, 0)));
    std::vector<double> ratios(part.size());
    parallel_for(part.size(), [&](std::size_t i) {
      Rng rng = case_rng(o.seed, static_cast<std::uint64_t>(dim) * 1000003 + i);
      const WellPosition w = well_position(random_thin_strip(rng, dim));
      ratios[i] = w.ratio;
      part[i] = {"d" + std::to_string(dim) + "-" + std::to_string(i), w.ratio <= w.standard_ratio,
                 "ratio=" + fmt_num(w.ratio) + ";standard=" + fmt_num(w.standard_ratio) +
                     ";fallback=" + (w.used_fallback ? "1" : "0")};
    });
    std::sort(ratios.begin(), ratios.end());
    const double median = ratios.empty() ? 0.0
                          : ratios.size() % 2 ? ratios[ratios.size() / 2]
                                              : 0.5 * (ratios[ratios.size() / 2 - 1] + ratios[ratios.size() / 2]);
    summary[std::to_string(dim)] = {{"median_ratio", to_json(median)}};
    rows.insert(rows.end(), part.begin(), part.end());
  }
  r.result = {{"summary", summary}, {"rows", json_rows(rows)}};
  r.csv = csv_suite(rows);
  return r;
}

Json basic_json(const BasicCheck& c) {
  return {{"nondegenerate", c.nondegenerate},
          {"volK", to_json(c.volume)},
          {"lattice", to_json(c.lattice)},
          {"gap", to_json(c.gap)},
          {"bound", c.nondegenerate ? to_json(c.bound) : Json(nullptr)},
          {"ratio", c.nondegenerate ? to_json(c.ratio) : Json(nullptr)},
          {"gamma", to_json(c.box.gamma)},
          {"estimate_boundary_fcells", to_json(boundary_fcell_estimate(c.box.gamma))}};
}

Report cmd_check_basic(const Options& o) {
  Report r;
  if (!o.body.empty()) {
    const SlabBox slab = make_slab(o);
    const MatZ basis = o.basis.empty() ? well_position(slab).basis : parse_int_matrix(o.basis);
    const BasicCheck c = check_basic_inequality(slab, basis);
    r.result = basic_json(c);
    r.result["basis"] = to_json(basis);
    if (!c.nondegenerate) r.warnings.push_back("nondeg violated: fewer than d+1 affinely independent lattice points");
    return r;
  }
  const int cases = o.cases.value_or(50);
  std::vector<SuiteRow> rows;
  double worst = 0.0;
  for (int dim : suite_dims(o)) {
    std::vector<SuiteRow> part(static_cast<std::size_t>(std::max(cases, 0)));
    std::vector<double> ratios(part.size(), 0.0);
    parallel_for(part.size(), [&](std::size_t i) {
      Rng rng = case_rng(o.seed, static_cast<std::uint64_t>(dim) * 1000003 + i);
      const SlabBox slab = random_thin_strip(rng, dim);
      const BasicCheck c = check_basic_inequality(slab, well_position(slab).basis);
      ratios[i] = c.ratio;
      part[i] = {"d" + std::to_string(dim) + "-" + std::to_string(i), c.nondegenerate && c.ratio <= 10.0,
                 "ratio=" + fmt_num(c.ratio) + ";nondegenerate=" + (c.nondegenerate ? "1" : "0")};
    });
    for (double x : ratios) worst = std::max(worst, x);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  r.result = {{"max_ratio", to_json(worst)}, {"rows", json_rows(rows)}};
  r.csv = csv_suite(rows);
  return r;
}

std::vector<Command> commands() {
  return {
      {"slice-vol", "volume of the hyperplane section v.x = t of [0,n]^d", {"normal", "t", "n"}, cmd_slice_vol},
      {"strip-vol", "volume of {t - width < v.x < t} in [0,n]^d", {"normal", "t", "width", "n"}, cmd_strip_vol},
      {"vd", "V_d(v) for --normal, or V_d(e) for --dim", {"dim", "normal"}, cmd_vd},
      {"vd-max", "numerical maximum of V_d(v) over directions", {"dim", "seed", "starts"}, cmd_vd_max},
      {"levels", "level counts r(h) of z.x on {0..n-1}^d", {"normal", "n"}, cmd_levels},
      {"slabmax", "M_d(z,n): best |z|_1 consecutive levels", {"normal", "n"}, cmd_slabmax},
      {"search", "best primitive direction with entries <= zmax", {"dim", "n", "zmax"}, cmd_search},
      {"nd-exact", "exact N^2(n) by exhaustive direction search", {"dim", "n", "zmax"}, cmd_nd_exact},
      {"convergence", "M_d(z,n)/n^(d-1) against V_d(z)", {"normal", "ns"}, cmd_convergence},
      {"cells-classify", "class of one unit cell", {"body", "center", "radius", "rows", "vertices", "interior", "normal", "lower", "upper", "n", "dim", "cell"}, cmd_cells_classify},
      {"cells-count", "inside/boundary cells and lattice points of a body", {"body", "center", "radius", "rows", "vertices", "interior", "normal", "lower", "upper", "n", "dim"}, cmd_cells_count},
      {"check-elem", "volume versus lattice points, one body or a random suite", {"body", "center", "radius", "rows", "vertices", "interior", "normal", "lower", "upper", "n", "dim", "cases", "seed"}, cmd_check_elem},
      {"check-monotone", "boundary cells of nested bodies, one body or a random suite", {"body", "center", "radius", "rows", "vertices", "interior", "normal", "lower", "upper", "n", "dim", "factor", "cases", "seed", "samples"}, cmd_check_monotone},
      {"mainK-experiment", "hyperplane cells inside a disk of radius n", {"dim", "n", "normal"}, cmd_mainK},
      {"basis-reduce", "well-positioned basis for a slab box, or a random strip suite", {"body", "normal", "lower", "upper", "n", "dim", "cases", "seed"}, cmd_basis_reduce},
      {"check-basic", "lattice count gap against vol K sum 1/gamma_i", {"body", "normal", "lower", "upper", "n", "dim", "basis", "cases", "seed"}, cmd_check_basic},
  };
}

void add_flag(CLI::App* app, const std::string& flag, Options& o) {
  static const std::map<std::string, std::string> help = {
      {"dim", "dimension d"},
      {"n", "box side / grid size"},
      {"normal", "comma-separated normal, integers or p/q"},
      {"t", "level, p/q or integer (decimals use floating point)"},
      {"width", "strip width in normal.x units"},
      {"zmax", "largest direction entry"},
      {"ns", "comma-separated grid sizes"},
      {"seed", "random seed (default 0)"},
      {"samples", "sample count"},
      {"cases", "number of random cases"},
      {"starts", "optimizer starts"},
      {"body", "ball | poly | simplex | slab | cube"},
      {"center", "ball center"},
      {"radius", "ball radius"},
      {"rows", "polytope rows a1,...,ad,b separated by ';' (a.x <= b)"},
      {"vertices", "simplex vertices separated by ';'"},
      {"interior", "interior point of the polytope"},
      {"lower", "slab lower level"},
      {"upper", "slab upper level"},
      {"cell", "cell corner"},
      {"basis", "basis rows separated by ';'"},
      {"factor", "shrink factor in (0,1]"},
  };
  const std::string name = "--" + flag;
  const std::string& text = help.at(flag);
  if (flag == "dim") app->add_option(name, o.dim, text);
  else if (flag == "n") app->add_option(name, o.n, text);
  else if (flag == "normal") app->add_option(name, o.normal, text);
  else if (flag == "t") app->add_option(name, o.t, text);
  else if (flag == "width") app->add_option(name, o.width, text);
  else if (flag == "zmax") app->add_option(name, o.zmax, text);
  else if (flag == "ns") app->add_option(name, o.ns, text);
  else if (flag == "seed") app->add_option(name, o.seed, text);
  else if (flag == "samples") app->add_option(name, o.samples, text);
  else if (flag == "cases") app->add_option(name, o.cases, text);
  else if (flag == "starts") app->add_option(name, o.starts, text);
  else if (flag == "body") app->add_option(name, o.body, text);
  else if (flag == "center") app->add_option(name, o.center, text);
  else if (flag == "radius") app->add_option(name, o.radius, text);
  else if (flag == "rows") app->add_option(name, o.rows, text);
  else if (flag == "vertices") app->add_option(name, o.vertices, text);
  else if (flag == "interior") app->add_option(name, o.interior, text);
  else if (flag == "lower") app->add_option(name, o.lower, text);
  else if (flag == "upper") app->add_option(name, o.upper, text);
  else if (flag == "cell") app->add_option(name, o.cell, text);
  else if (flag == "basis") app->add_option(name, o.basis, text);
  else if (flag == "factor") app->add_option(name, o.factor, text);
}

Json config_json(const CLI::App& sub, const Options& o) {
  Json config = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    for (const auto& part : opt->results()) value += (value.empty() ? "" : ",") + part;
    config[name] = value;
  }
  config["seed"] = o.seed;
  config["format"] = o.format;
  return config;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw PreconditionError("cannot write " + temp.string());
    file << text;
    if (!file.flush()) throw PreconditionError("cannot write " + temp.string());
  }
  std::filesystem::rename(temp, target);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counting unit cells of [0,n]^d met by hyperplanes and slabs", "boxcells"};
  app.require_subcommand(1);
  Options options;
  const std::vector<Command> table = commands();
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const Command& command : table) {
    CLI::App* sub = app.add_subcommand(command.name, command.description);
    for (const auto& flag : command.flags) add_flag(sub, flag, options);
    sub->add_option("--format", options.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", options.out, "output file (written atomically)");
    subs.emplace_back(sub, &command);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ExtrasError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const CLI::RequiredError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  for (const auto& [sub, command] : subs) {
    if (!sub->parsed()) continue;
    try {
      Report report = command->handler(options);
      std::string text;
      if (options.format == "csv") {
        if (!report.csv) throw PreconditionError(command->name + " has no CSV output; use --format json");
        text = *report.csv;
      } else {
        Json envelope{{"cmd", command->name},
                      {"config", config_json(*sub, options)},
                      {"result", report.result},
                      {"warnings", report.warnings}};
        text = envelope.dump(2) + "\n";
      }
      write_output(text, options.out, out);
      return kExitOk;
    } catch (const FixtureError& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    } catch (const std::out_of_range& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return kExitUsage;
}

}  // namespace boxcells::cli
