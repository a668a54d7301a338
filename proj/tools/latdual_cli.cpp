// Command-line front end: lattice generators, Fourier/admissibility checks,
// gauged partition sums and duality checks, finite path-integral counts,
// and the fusion-category state-sum backends.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "latdual/groups.hpp"
#include "latdual/harmonic.hpp"
#include "latdual/homology.hpp"
#include "latdual/ising.hpp"
#include "latdual/surface.hpp"
#include "latdual/tqft.hpp"
#include "latdual/turaev_viro.hpp"

using namespace latdual;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  bool json = false;
  bool quiet = false;
  bool no_timing = false;
  int threads = 1;
  double tol = 1e-8;
  int group_cap = FiniteGroup::kDefaultOrderCap;
  long long spin_cap = 1 << 24;
  long long state_cap = 1 << 16;
  long long enum_cap = 4096;
  std::vector<std::string> input_files;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a64(const std::string& data) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> parse_theta(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw ParseError("empty theta list");
  return out;
}

// "v:chi,v:chi" pairs.
std::vector<std::pair<int, int>> parse_pairs(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("expected site:value pairs: " + s);
    out.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
  }
  return out;
}

ordered_json manifest(const Options& opt, const std::vector<std::string>& argv_copy) {
  ordered_json m;
  m["version"] = kVersion;
  m["command"] = argv_copy;
  ordered_json hashes = ordered_json::object();
  for (const auto& f : opt.input_files) hashes[f] = fnv1a64(read_file(f));
  m["input_hashes"] = hashes;
  m["tolerance"] = opt.tol;
  m["caps"] = {{"group_order", opt.group_cap},
               {"spin_configurations", opt.spin_cap},
               {"state_dimension", opt.state_cap},
               {"class_enumeration", opt.enum_cap}};
  m["threads"] = opt.threads;
  if (!opt.no_timing) {
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          opt.start)
                    .count();
    m["wall_ms"] = ms;
  }
  return m;
}

void emit(const Options& opt, const std::vector<std::string>& argv_copy, ordered_json result,
          const std::string& table, const std::string& verdict = "") {
  if (opt.json) {
    ordered_json out;
    out["result"] = std::move(result);
    out["manifest"] = manifest(opt, argv_copy);
    std::cout << out.dump(2) << "\n";
  } else if (opt.quiet) {
    if (!verdict.empty()) std::cout << verdict << "\n";
  } else {
    std::cout << table;
    if (!verdict.empty()) std::cout << verdict << "\n";
  }
}

Lattice2 load_lattice(Options& opt, const std::string& path) {
  opt.input_files.push_back(path);
  auto lat = lattice_from_json(read_file(path));
  auto report = validate(lat);
  if (!report.valid) {
    std::string msg = "invalid lattice " + path + ":";
    for (const auto& f : report.failures) msg += " [" + f + "]";
    throw ParseError(msg);
  }
  return lat;
}

Insertions make_insertions(const std::string& order, const std::string& disorder) {
  Insertions ins;
  ins.order = parse_pairs(order);
  ins.disorder = parse_pairs(disorder);
  return ins;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latdual: finite-group lattice models, dualities, and state sums"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  Options opt;
  // Environment defaults, overridable by flags.
  if (const char* e = std::getenv("LATDUAL_THREADS")) opt.threads = std::atoi(e);
  if (const char* e = std::getenv("LATDUAL_SPIN_CAP")) opt.spin_cap = std::atoll(e);
  if (const char* e = std::getenv("LATDUAL_STATE_CAP")) opt.state_cap = std::atoll(e);
  if (const char* e = std::getenv("LATDUAL_GROUP_CAP")) opt.group_cap = std::atoi(e);

  std::vector<std::string> argv_copy(argv, argv + argc);
  app.add_flag("--json", opt.json, "emit a JSON report with the run manifest");
  app.add_flag("--quiet", opt.quiet, "emit only the verdict line");
  app.add_flag("--no-timing", opt.no_timing, "omit wall time for byte-identical reports");
  app.add_option("--threads", opt.threads, "worker threads for configuration sums");
  app.add_option("--tol", opt.tol, "pass/fail tolerance for duality checks");
  app.add_option("--group-cap", opt.group_cap, "group order cap");
  app.add_option("--spin-cap", opt.spin_cap, "configuration count cap");
  app.add_option("--state-cap", opt.state_cap, "state-space dimension cap");
  app.add_option("--enum-cap", opt.enum_cap, "class enumeration cap");

  int exit_code = 0;

  // ---- lattice ----
  auto* lattice_cmd = app.add_subcommand("lattice", "generate, dualize, validate lattices");
  lattice_cmd->require_subcommand(1);
  {
    auto* gen = lattice_cmd->add_subcommand("gen", "generate a lattice");
    auto kind = std::make_shared<std::string>("torus");
    auto m = std::make_shared<int>(3), n = std::make_shared<int>(3), g = std::make_shared<int>(1);
    auto out_path = std::make_shared<std::string>();
    gen->add_option("--kind", *kind, "torus | sphere_cube | sphere_tetra | genus");
    gen->add_option("--m", *m, "torus rows");
    gen->add_option("--n", *n, "torus columns");
    gen->add_option("--g", *g, "genus");
    gen->add_option("-o,--out", *out_path, "output file (stdout if omitted)");
    gen->callback([&, kind, m, n, g, out_path] {
      auto lat = generate_lattice(*kind, *m, *n, *g);
      std::string text = lattice_to_json(lat);
      if (out_path->empty()) {
        std::cout << text << "\n";
      } else {
        std::ofstream f(*out_path);
        f << text << "\n";
        if (!opt.quiet)
          std::cout << "wrote " << *out_path << " (V=" << lat.num_vertices
                    << " E=" << lat.num_edges() << " F=" << lat.num_faces() << ")\n";
      }
    });

    auto* dual = lattice_cmd->add_subcommand("dual", "combinatorial dual lattice");
    auto in_path = std::make_shared<std::string>();
    auto dual_out = std::make_shared<std::string>();
    dual->add_option("--lattice", *in_path, "input lattice file")->required();
    dual->add_option("-o,--out", *dual_out, "output file (stdout if omitted)");
    dual->callback([&, in_path, dual_out] {
      auto lat = load_lattice(opt, *in_path);
      auto d = dual_lattice(lat);
      std::string text = lattice_to_json(d.lat);
      if (dual_out->empty()) std::cout << text << "\n";
      else {
        std::ofstream f(*dual_out);
        f << text << "\n";
      }
    });

    auto* val = lattice_cmd->add_subcommand("validate", "check the lattice invariants");
    auto val_path = std::make_shared<std::string>();
    val->add_option("lattice", *val_path, "lattice file")->required();
    val->callback([&, val_path] {
      opt.input_files.push_back(*val_path);
      auto lat = lattice_from_json(read_file(*val_path));
      auto report = validate(lat);
      ordered_json res;
      res["valid"] = report.valid;
      res["failures"] = report.failures;
      std::ostringstream table;
      for (const auto& f : report.failures) table << "failure: " << f << "\n";
      emit(opt, argv_copy, res, table.str(), report.valid ? "valid" : "invalid");
      if (!report.valid) exit_code = 1;
    });
  }

  // ---- fourier / admissible ----
  {
    auto* fourier = app.add_subcommand("fourier", "Fourier transform of a weight function");
    auto gspec = std::make_shared<std::string>();
    auto theta_s = std::make_shared<std::string>();
    fourier->add_option("--group", *gspec, "group descriptor")->required();
    fourier->add_option("--theta", *theta_s, "comma list in canonical element order")->required();
    fourier->callback([&, gspec, theta_s] {
      auto g = build_group(*gspec, opt.group_cap);
      auto theta = parse_theta(*theta_s);
      ordered_json res;
      std::ostringstream table;
      if (g.is_abelian() && is_even(theta, g)) {
        auto f = fourier_abelian_even(theta, g.abelian());
        res["transform"] = f;
        for (size_t i = 0; i < f.size(); ++i)
          table << g.element_name(static_cast<int>(i)) << "  " << fmt(f[i]) << "\n";
      } else if (g.is_abelian()) {
        auto f = fourier_abelian(WeightFunction(theta), g.abelian());
        auto arr = ordered_json::array();
        for (size_t i = 0; i < f.size(); ++i) {
          arr.push_back({f[i].real(), f[i].imag()});
          table << g.element_name(static_cast<int>(i)) << "  " << fmt(f[i].real()) << " + "
                << fmt(f[i].imag()) << "i\n";
        }
        res["transform"] = arr;
      } else {
        auto irr = irreducibles(g);
        auto t = fourier_nonabelian(theta, g, irr);
        auto arr = ordered_json::array();
        for (size_t i = 0; i < t.blocks.size(); ++i) {
          ordered_json block;
          block["dim"] = irr[i].dim;
          auto rows = ordered_json::array();
          for (int r = 0; r < irr[i].dim; ++r) {
            auto row = ordered_json::array();
            for (int c = 0; c < irr[i].dim; ++c)
              row.push_back({t.blocks[i](r, c).real(), t.blocks[i](r, c).imag()});
            rows.push_back(row);
          }
          block["matrix"] = rows;
          arr.push_back(block);
          table << "irrep " << i << " (dim " << irr[i].dim << ")\n";
        }
        res["transform_blocks"] = arr;
      }
      emit(opt, argv_copy, res, table.str());
    });

    auto* adm = app.add_subcommand("admissible", "admissibility test with witness");
    auto gspec2 = std::make_shared<std::string>();
    auto theta2 = std::make_shared<std::string>();
    adm->add_option("--group", *gspec2, "group descriptor")->required();
    adm->add_option("--theta", *theta2, "comma list")->required();
    adm->callback([&, gspec2, theta2] {
      auto g = build_group(*gspec2, opt.group_cap);
      auto verdict = is_admissible(parse_theta(*theta2), g);
      ordered_json res;
      res["admissible"] = verdict.admissible;
      res["detail"] = verdict.describe();
      emit(opt, argv_copy, res, verdict.describe() + "\n",
           verdict.admissible ? "admissible" : "inadmissible");
      if (!verdict.admissible) exit_code = 1;
    });
  }

  // ---- cohomology ----
  {
    auto* coh = app.add_subcommand("cohomology", "cohomology orders of a lattice or complex");
    auto gspec = std::make_shared<std::string>();
    auto lat_path = std::make_shared<std::string>();
    auto cx_path = std::make_shared<std::string>();
    coh->add_option("--group", *gspec, "abelian group descriptor")->required();
    coh->add_option("--lattice", *lat_path, "lattice file");
    coh->add_option("--complex", *cx_path, "simplicial complex file");
    coh->callback([&, gspec, lat_path, cx_path] {
      auto g = build_group(*gspec, opt.group_cap);
      const auto& a = g.abelian();
      ordered_json res;
      std::ostringstream table;
      if (!lat_path->empty()) {
        auto lat = load_lattice(opt, *lat_path);
        auto data = cohomology(coboundaries(lat, a), opt.enum_cap);
        res["orders"] = {data.order[0], data.order[1], data.order[2]};
        res["h1_representatives_available"] = data.reps_available;
        for (int i = 0; i < 3; ++i) table << "#H^" << i << " = " << data.order[i] << "\n";
      } else if (!cx_path->empty()) {
        opt.input_files.push_back(*cx_path);
        auto x = simplicial_from_json(read_file(*cx_path));
        auto orders = simplicial_cohomology(x, a);
        res["orders"] = orders;
        for (size_t i = 0; i < orders.size(); ++i)
          table << "#H^" << i << " = " << orders[i] << "\n";
      } else {
        throw ParseError("need --lattice or --complex");
      }
      emit(opt, argv_copy, res, table.str());
    });
  }

  // ---- ising ----
  auto* ising_cmd = app.add_subcommand("ising", "gauged partition sums and duality checks");
  ising_cmd->require_subcommand(1);
  {
    auto lat_path = std::make_shared<std::string>();
    auto gspec = std::make_shared<std::string>();
    auto theta_s = std::make_shared<std::string>();
    auto order_s = std::make_shared<std::string>();
    auto disorder_s = std::make_shared<std::string>();
    auto hol_s = std::make_shared<std::string>();
    auto normalize = std::make_shared<bool>(false);
    auto sites = std::make_shared<int>(2);
    auto twist = std::make_shared<int>(0);

    auto add_common = [&](CLI::App* cmd) {
      cmd->add_option("--lattice", *lat_path, "lattice file")->required();
      cmd->add_option("--group", *gspec, "group descriptor")->required();
      cmd->add_option("--theta", *theta_s, "weight list in canonical order")->required();
      cmd->add_option("--order", *order_s, "order insertions v:chi,...");
      cmd->add_option("--disorder", *disorder_s, "disorder insertions f:elem,...");
    };

    auto* part = ising_cmd->add_subcommand("partition", "configuration sum on a background");
    add_common(part);
    part->add_option("--hol", *hol_s, "background edge labels, comma list");
    part->callback([&, lat_path, gspec, theta_s, order_s, disorder_s, hol_s] {
      auto lat = load_lattice(opt, *lat_path);
      auto g = build_group(*gspec, opt.group_cap);
      auto theta = parse_theta(*theta_s);
      auto ins = make_insertions(*order_s, *disorder_s);
      FlatBackground bg = FlatBackground::trivial(g, lat);
      if (!hol_s->empty()) {
        auto vals = parse_theta(*hol_s);
        if (static_cast<int>(vals.size()) != lat.num_edges())
          throw ParseError("--hol length != edge count");
        for (int e = 0; e < lat.num_edges(); ++e) bg.hol[e] = static_cast<int>(vals[e]);
        for (int f = 0; f < lat.num_faces(); ++f)
          bg.face_class[f] = g.class_of(bg.face_holonomy(lat, f));
      }
      SpinCaps caps{opt.spin_cap, opt.threads};
      double z = spin_partition(lat, g, theta, bg, ins, caps);
      ordered_json res;
      res["value"] = z;
      emit(opt, argv_copy, res, "Z = " + fmt(z) + "\n", fmt(z));
    });

    auto* vec = ising_cmd->add_subcommand("vector", "partition vector over background classes");
    add_common(vec);
    vec->callback([&, lat_path, gspec, theta_s, order_s, disorder_s] {
      auto lat = load_lattice(opt, *lat_path);
      auto g = build_group(*gspec, opt.group_cap);
      if (!g.is_abelian()) throw NotAbelian("partition vectors need an abelian group");
      SpinCaps caps{opt.spin_cap, opt.threads};
      auto pv = partition_vector(lat, g.abelian(), parse_theta(*theta_s),
                                 make_insertions(*order_s, *disorder_s), caps);
      ordered_json res;
      auto arr = ordered_json::array();
      std::ostringstream table;
      table << "class  value\n";
      for (size_t k = 0; k < pv.values.size(); ++k) {
        arr.push_back({pv.values[k].real(), pv.values[k].imag()});
        table << k << "  " << fmt(pv.values[k].real());
        if (std::abs(pv.values[k].imag()) > 1e-12)
          table << " + " << fmt(pv.values[k].imag()) << "i";
        table << "\n";
      }
      res["values"] = arr;
      res["classes"] = pv.values.size();
      emit(opt, argv_copy, res, table.str());
    });

    auto* kw = ising_cmd->add_subcommand("kw-check", "Kramers-Wannier duality check");
    add_common(kw);
    kw->add_flag("--normalize-vertices", *normalize,
                 "rescale by (#A)^(-1/2) per vertex so the factor is 1");
    kw->callback([&, lat_path, gspec, theta_s, order_s, disorder_s, normalize] {
      auto lat = load_lattice(opt, *lat_path);
      auto g = build_group(*gspec, opt.group_cap);
      if (!g.is_abelian()) throw NotAbelian("kw-check needs an abelian group");
      SpinCaps caps{opt.spin_cap, opt.threads};
      auto rep = kw_dual_check(lat, g.abelian(), parse_theta(*theta_s),
                               make_insertions(*order_s, *disorder_s), caps, *normalize);
      bool pass = rep.passed(opt.tol);
      ordered_json res;
      res["factor"] = rep.factor;
      res["max_abs_err"] = rep.max_abs_err;
      res["selection_rule_zero"] = rep.selection_rule_zero;
      res["passed"] = pass;
      auto rows = ordered_json::array();
      std::ostringstream table;
      table << "class  lhs  rhs  abs_err\n";
      for (const auto& r : rep.rows) {
        rows.push_back({{"class", r.klass},
                        {"lhs", {r.lhs.real(), r.lhs.imag()}},
                        {"rhs", {r.rhs.real(), r.rhs.imag()}},
                        {"abs_err", r.abs_err}});
        table << r.klass << "  " << fmt(r.lhs.real()) << "  " << fmt(r.rhs.real()) << "  "
              << fmt(r.abs_err) << "\n";
      }
      res["rows"] = rows;
      table << "factor = " << fmt(rep.factor) << ", max error = " << fmt(rep.max_abs_err) << "\n";
      emit(opt, argv_copy, res, table.str(), pass ? "PASS" : "FAIL");
      if (!pass) exit_code = 3;
    });

    auto* tr = ising_cmd->add_subcommand("transfer", "transfer matrix spectrum on a circle");
    tr->add_option("--sites", *sites, "number of circle sites (>= 2)")->required();
    tr->add_option("--group", *gspec, "group descriptor")->required();
    tr->add_option("--theta", *theta_s, "weight list")->required();
    tr->add_option("--twist", *twist, "holonomy element index on the marked edge");
    tr->callback([&, sites, gspec, theta_s, twist] {
      auto g = build_group(*gspec, opt.group_cap);
      auto t = transfer_matrix({*sites}, g, parse_theta(*theta_s), *twist, opt.state_cap);
      auto s = transfer_spectrum(t);
      ordered_json res;
      res["dimension"] = t.rows();
      res["top_eigenvalue"] = s.top;
      res["top_multiplicity"] = s.top_multiplicity;
      res["rank"] = s.rank;
      std::ostringstream table;
      table << "dim " << t.rows() << "\ntop eigenvalue " << fmt(s.top) << " (multiplicity "
            << s.top_multiplicity << ")\nrank " << s.rank << "\n";
      emit(opt, argv_copy, res, table.str());
    });
  }

  // ---- tqft ----
  auto* tqft_cmd = app.add_subcommand("tqft", "finite path-integral evaluations");
  tqft_cmd->require_subcommand(1);
  {
    auto gspec = std::make_shared<std::string>();
    auto pres_path = std::make_shared<std::string>();
    auto pres_name = std::make_shared<std::string>();
    auto* count = tqft_cmd->add_subcommand("count", "bundle count from a presentation");
    count->add_option("--group", *gspec)->required();
    count->add_option("--presentation", *pres_path, "presentation JSON file");
    count->add_option("--name", *pres_name, "trivial | free:k | abelian:k | surface:g");
    count->callback([&, gspec, pres_path, pres_name] {
      auto g = build_group(*gspec, opt.group_cap);
      GroupPresentation p;
      if (!pres_path->empty()) {
        opt.input_files.push_back(*pres_path);
        p = presentation_from_json(read_file(*pres_path));
      } else if (!pres_name->empty()) {
        auto colon = pres_name->find(':');
        std::string base = pres_name->substr(0, colon);
        int arg = colon == std::string::npos ? 0 : std::stoi(pres_name->substr(colon + 1));
        if (base == "trivial") p = GroupPresentation::trivial();
        else if (base == "free") p = GroupPresentation::free_group(arg);
        else if (base == "abelian") p = GroupPresentation::free_abelian(arg);
        else if (base == "surface") p = GroupPresentation::surface_group(arg);
        else throw ParseError("unknown presentation name: " + *pres_name);
      } else {
        throw ParseError("need --presentation or --name");
      }
      auto c = count_bundles(p, g, opt.spin_cap);
      ordered_json res;
      res["hom_count"] = c.hom_count;
      res["groupoid_count"] = {{"num", c.groupoid.num}, {"den", c.groupoid.den}};
      std::ostringstream table;
      table << "#Hom = " << c.hom_count << "\ngroupoid count = " << c.groupoid.num << "/"
            << c.groupoid.den << " = " << fmt(c.groupoid.value()) << "\n";
      emit(opt, argv_copy, res, table.str());
    });

    auto lat_path = std::make_shared<std::string>();
    auto cx_path = std::make_shared<std::string>();
    auto cx_name = std::make_shared<std::string>();
    auto degree = std::make_shared<int>(1);
    auto load_orders = [&, cx_path, cx_name, lat_path](const FiniteGroup& g, long long& euler) {
      const auto& a = g.abelian();
      if (!lat_path->empty()) {
        auto lat = load_lattice(opt, *lat_path);
        euler = lat.euler_characteristic();
        auto coh = cohomology(coboundaries(lat, a), 1);
        return std::vector<long long>{coh.order[0], coh.order[1], coh.order[2]};
      }
      SimplicialComplex x;
      if (!cx_path->empty()) {
        opt.input_files.push_back(*cx_path);
        x = simplicial_from_json(read_file(*cx_path));
      } else if (*cx_name == "t3") {
        x = torus3_complex();
      } else if (*cx_name == "rp2") {
        x = rp2_complex();
      } else if (*cx_name == "s3") {
        x = boundary_of_simplex(4);
      } else {
        throw ParseError("need --lattice, --complex, or --name t3|rp2|s3");
      }
      auto rep = em_duality_check(x, a, 0);  // reuses the cell-count Euler number
      euler = rep.euler;
      return simplicial_cohomology(x, a);
    };

    auto* higher = tqft_cmd->add_subcommand("higher", "degree-r finite path integral");
    higher->add_option("--group", *gspec)->required();
    higher->add_option("--r", *degree, "theory degree")->required();
    higher->add_option("--lattice", *lat_path);
    higher->add_option("--complex", *cx_path);
    higher->add_option("--name", *cx_name, "t3 | rp2 | s3");
    higher->callback([&, gspec, degree] {
      auto g = build_group(*gspec, opt.group_cap);
      long long euler = 0;
      auto orders = load_orders(g, euler);
      auto z = higher_partition(orders, *degree);
      ordered_json res;
      res["orders"] = orders;
      res["value"] = {{"num", z.num}, {"den", z.den}};
      emit(opt, argv_copy, res,
           "Z = " + std::to_string(z.num) + "/" + std::to_string(z.den) + "\n",
           fmt(z.value()));
    });

    auto* emdual = tqft_cmd->add_subcommand("emdual", "electromagnetic duality ratio check");
    emdual->add_option("--group", *gspec)->required();
    emdual->add_option("--r", *degree, "theory degree")->required();
    emdual->add_option("--lattice", *lat_path);
    emdual->add_option("--complex", *cx_path);
    emdual->add_option("--name", *cx_name, "t3 | rp2 | s3");
    emdual->callback([&, gspec, degree] {
      auto g = build_group(*gspec, opt.group_cap);
      long long euler = 0;
      auto orders = load_orders(g, euler);
      int n = static_cast<int>(orders.size()) - 1;
      auto rep = em_duality_check(orders, g.abelian(), *degree, n, euler);
      ordered_json res;
      res["z"] = {{"num", rep.z.num}, {"den", rep.z.den}};
      res["z_dual"] = {{"num", rep.z_dual.num}, {"den", rep.z_dual.den}};
      res["ratio"] = {{"num", rep.ratio.num}, {"den", rep.ratio.den}};
      res["euler"] = rep.euler;
      res["expected_exponent"] = rep.exponent;
      res["passed"] = rep.ok;
      std::ostringstream table;
      table << "Z = " << rep.z.num << "/" << rep.z.den << ", Z_dual = " << rep.z_dual.num << "/"
            << rep.z_dual.den << ", ratio = " << rep.ratio.num << "/" << rep.ratio.den
            << ", expected (#A)^" << rep.exponent << "\n";
      emit(opt, argv_copy, res, table.str(), rep.ok ? "PASS" : "FAIL");
      if (!rep.ok) exit_code = 3;
    });

    auto theta_s = std::make_shared<std::string>();
    auto order_s = std::make_shared<std::string>();
    auto disorder_s = std::make_shared<std::string>();
    auto meridians_path = std::make_shared<std::string>();
    auto* hb = tqft_cmd->add_subcommand("handlebody", "pair a handlebody with the boundary sum");
    hb->add_option("--lattice", *lat_path)->required();
    hb->add_option("--meridians", *meridians_path, "JSON {\"meridians\":[[[edge,dir],...],...]}")
        ->required();
    hb->add_option("--group", *gspec)->required();
    hb->add_option("--theta", *theta_s)->required();
    hb->add_option("--order", *order_s);
    hb->add_option("--disorder", *disorder_s);
    hb->callback([&, lat_path, meridians_path, gspec, theta_s, order_s, disorder_s] {
      HandlebodyData h;
      h.boundary = load_lattice(opt, *lat_path);
      opt.input_files.push_back(*meridians_path);
      auto j = nlohmann::json::parse(read_file(*meridians_path));
      for (const auto& walk : j.at("meridians")) {
        std::vector<Lattice2::FaceSlot> w;
        for (const auto& s : walk) w.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
        h.meridians.push_back(w);
      }
      auto g = build_group(*gspec, opt.group_cap);
      SpinCaps caps{opt.spin_cap, opt.threads};
      double v = pair_with_handlebody(h, g, parse_theta(*theta_s),
                                      make_insertions(*order_s, *disorder_s), caps);
      ordered_json res;
      res["value"] = v;
      emit(opt, argv_copy, res, "value = " + fmt(v) + "\n", fmt(v));
    });

    auto wilson = std::make_shared<int>(-1);
    auto thooft = std::make_shared<int>(-1);
    auto marked_v = std::make_shared<int>(0);
    auto marked_f = std::make_shared<int>(0);
    auto* loop = tqft_cmd->add_subcommand("loop", "loop operator on S^1 x Y");
    loop->add_option("--lattice", *lat_path)->required();
    loop->add_option("--group", *gspec)->required();
    loop->add_option("--wilson", *wilson, "character index");
    loop->add_option("--thooft", *thooft, "conjugacy class index");
    loop->add_option("--vertex", *marked_v, "marked vertex for Wilson");
    loop->add_option("--face", *marked_f, "marked face for 't Hooft");
    loop->callback([&, lat_path, gspec, wilson, thooft, marked_v, marked_f] {
      auto lat = load_lattice(opt, *lat_path);
      auto g = build_group(*gspec, opt.group_cap);
      double v;
      if (*wilson >= 0)
        v = loop_operator_s1xy(lat, g, LoopKind::wilson, *wilson, *marked_v, *marked_f,
                               opt.spin_cap);
      else if (*thooft >= 0)
        v = loop_operator_s1xy(lat, g, LoopKind::thooft, *thooft, *marked_v, *marked_f,
                               opt.spin_cap);
      else
        throw ParseError("need --wilson or --thooft");
      ordered_json res;
      res["value"] = v;
      emit(opt, argv_copy, res, "value = " + fmt(v) + "\n", fmt(v));
    });
  }

  // ---- tv ----
  auto* tv_cmd = app.add_subcommand("tv", "fusion-category state sums");
  tv_cmd->require_subcommand(1);
  {
    auto gspec = std::make_shared<std::string>();
    auto lat_path = std::make_shared<std::string>();
    auto backend_s = std::make_shared<std::string>("vect");
    auto theta_s = std::make_shared<std::string>();
    auto antipode_flag = std::make_shared<bool>(false);

    auto make_backend = [backend_s](const FiniteGroup& g) {
      if (*backend_s == "vect") return FusionBackend::make(BackendKind::vect, g);
      if (*backend_s == "rep") return FusionBackend::make(BackendKind::rep, g);
      throw ParseError("--backend must be vect or rep");
    };

    auto* dim = tv_cmd->add_subcommand("state-dim", "state-space dimension");
    dim->add_option("--backend", *backend_s, "vect | rep");
    dim->add_option("--group", *gspec)->required();
    dim->add_option("--lattice", *lat_path)->required();
    dim->callback([&, gspec, lat_path, make_backend] {
      auto g = build_group(*gspec, opt.group_cap);
      auto lat = load_lattice(opt, *lat_path);
      auto b = make_backend(g);
      auto ss = state_space(b, lat, opt.state_cap);
      ordered_json res;
      res["dimension"] = ss.dim;
      res["categorical_dim"] = b.categorical_dim();
      res["sphere_value"] = b.sphere_value();
      emit(opt, argv_copy, res, "dimension = " + std::to_string(ss.dim) + "\n",
           std::to_string(ss.dim));
    });

    auto* pc = tv_cmd->add_subcommand("projector-check", "vertex projector diagnostics");
    pc->add_option("--backend", *backend_s, "vect | rep");
    pc->add_option("--group", *gspec)->required();
    pc->add_option("--lattice", *lat_path)->required();
    pc->callback([&, gspec, lat_path, make_backend] {
      auto g = build_group(*gspec, opt.group_cap);
      auto lat = load_lattice(opt, *lat_path);
      auto b = make_backend(g);
      auto ss = state_space(b, lat, opt.state_cap);
      double idem = 0, selfadj = 0, comm = 0;
      std::vector<Eigen::MatrixXcd> ps;
      for (int v = 0; v < lat.num_vertices; ++v) ps.push_back(vertex_projector(ss, v));
      for (const auto& p : ps) {
        idem = std::max(idem, (p * p - p).cwiseAbs().maxCoeff());
        selfadj = std::max(selfadj, (p - p.adjoint()).cwiseAbs().maxCoeff());
      }
      for (size_t i = 0; i < ps.size(); ++i)
        for (size_t j = i + 1; j < ps.size(); ++j)
          comm = std::max(comm, (ps[i] * ps[j] - ps[j] * ps[i]).cwiseAbs().maxCoeff());
      double trace = full_projector_trace(ss);
      ordered_json res;
      res["dimension"] = ss.dim;
      res["max_idempotence_error"] = idem;
      res["max_selfadjointness_error"] = selfadj;
      res["max_commutator_error"] = comm;
      res["product_trace"] = trace;
      std::ostringstream table;
      table << "dim " << ss.dim << "\nidempotence error " << fmt(idem)
            << "\nself-adjointness error " << fmt(selfadj) << "\ncommutator error " << fmt(comm)
            << "\nproduct trace " << fmt(trace) << "\n";
      bool pass = idem < 1e-9 && selfadj < 1e-9 && comm < 1e-9;
      emit(opt, argv_copy, res, table.str(), pass ? "PASS" : "FAIL");
      if (!pass) exit_code = 3;
    });

    auto* iv = tv_cmd->add_subcommand("ising-vector", "projected boundary vector");
    iv->add_option("--backend", *backend_s, "vect | rep");
    iv->add_option("--group", *gspec)->required();
    iv->add_option("--lattice", *lat_path)->required();
    iv->add_option("--theta", *theta_s, "group weight list (rep backend transforms it)")
        ->required();
    iv->add_flag("--antipode", *antipode_flag, "use the antipodal image of the action");
    iv->callback([&, gspec, lat_path, theta_s, antipode_flag, make_backend] {
      auto g = build_group(*gspec, opt.group_cap);
      auto lat = load_lattice(opt, *lat_path);
      auto b = make_backend(g);
      auto ss = state_space(b, lat, opt.state_cap);
      auto theta = parse_theta(*theta_s);
      IsingAction action =
          b.kind() == BackendKind::vect
              ? action_from_weight(b, theta)
              : action_from_transform(b, fourier_nonabelian(theta, g, b.irreps()));
      if (*antipode_flag) action = antipode(action);
      auto projected = ising_vector(ss, action);
      ordered_json res;
      res["dimension"] = ss.dim;
      res["norm"] = projected.norm();
      std::ostringstream table;
      table << "dim " << ss.dim << ", projected norm " << fmt(projected.norm()) << "\n";
      if (b.kind() == BackendKind::vect) {
        auto cv = vect_class_values(ss, projected);
        auto arr = ordered_json::array();
        table << "class values (scaled by #G^V):\n";
        for (size_t k = 0; k < cv.values.size(); ++k) {
          arr.push_back({cv.values[k].real(), cv.values[k].imag()});
          table << k << "  " << fmt(cv.values[k].real()) << "\n";
        }
        res["class_values"] = arr;
      }
      emit(opt, argv_copy, res, table.str());
    });

    auto theta2 = std::make_shared<std::string>();
    auto theta3 = std::make_shared<std::string>();
    auto* dc = tv_cmd->add_subcommand("duality-check", "duality harness");
    dc->add_option("--group", *gspec)->required();
    dc->add_option("--lattice", *lat_path)->required();
    dc->add_option("--theta", *theta_s, "first weight sample")->required();
    dc->add_option("--theta2", *theta2, "second weight sample");
    dc->add_option("--theta3", *theta3, "third weight sample");
    dc->add_flag("--antipode", *antipode_flag);
    dc->callback([&, gspec, lat_path, theta_s, theta2, theta3, antipode_flag] {
      auto g = build_group(*gspec, opt.group_cap);
      auto lat = load_lattice(opt, *lat_path);
      std::vector<WeightFunction> thetas = {parse_theta(*theta_s)};
      if (!theta2->empty()) thetas.push_back(parse_theta(*theta2));
      if (!theta3->empty()) thetas.push_back(parse_theta(*theta3));
      SpinCaps caps{opt.spin_cap, opt.threads};
      auto rep = duality_harness(g, lat, thetas, caps, *antipode_flag);
      ordered_json res;
      std::ostringstream table;
      bool pass;
      if (rep.abelian_route) {
        res["route"] = "abelian";
        res["factor"] = rep.factor;
        res["max_errors"] = rep.kw_errors;
        double worst = 0;
        for (double e : rep.kw_errors) worst = std::max(worst, e);
        table << "abelian route, factor " << fmt(rep.factor) << ", worst error " << fmt(worst)
              << "\n";
        pass = worst <= opt.tol;
      } else {
        res["route"] = "nonabelian";
        res["vect_scalars"] = rep.vect_scalars;
        res["rep_scalars"] = rep.rep_scalars;
        res["ratios"] = rep.ratios;
        res["measured_constant"] = rep.measured_constant;
        res["relative_spread"] = rep.relative_spread;
        table << "nonabelian route, measured constant " << fmt(rep.measured_constant)
              << ", relative spread " << fmt(rep.relative_spread) << "\n";
        pass = rep.relative_spread <= 1e-6;
      }
      res["passed"] = pass;
      emit(opt, argv_copy, res, table.str(), pass ? "PASS" : "FAIL");
      if (!pass) exit_code = 3;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
