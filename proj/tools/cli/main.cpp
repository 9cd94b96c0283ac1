// Copyright 2026 The slabgff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "slabgff/capacity.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/gff.hpp"
#include "slabgff/greens.hpp"
#include "slabgff/parallel.hpp"
#include "slabgff/predictions.hpp"
#include "slabgff/slab.hpp"
#include "slabgff/version.hpp"
#include "validation.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace slabgff;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitValidate = 4;

// Keys that never enter the run id.
bool operational(const std::string& k) { return k == "out" || k == "threads" || k == "config"; }

struct Session {
  cli::RunManifest manifest;
  fs::path out;
  std::chrono::steady_clock::time_point t0;

  std::string path(const std::string& name) const { return (out / name).string(); }

  std::ofstream csv(const std::string& name) {
    manifest.outputs.push_back(name);
    std::ofstream os(path(name));
    if (!os) throw PreconditionError("cannot write " + path(name));
    os << std::setprecision(17);
    os << "# run_id=" << manifest.run_id << "\n";
    return os;
  }

  void json(const std::string& name, Json j) {
    manifest.outputs.push_back(name);
    Json full;
    full["run_id"] = manifest.run_id;
    for (auto& [k, v] : j.items()) full[k] = v;
    std::ofstream os(path(name));
    if (!os) throw PreconditionError("cannot write " + path(name));
    os << full.dump(2) << "\n";
  }

  void finish() {
    manifest.finished = cli::utc_now();
    manifest.timing = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream os(path("manifest.json"));
    os << manifest.to_json();
  }
};

// Flat key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw CLI::ValidationError("--config", "cannot read " + file);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const auto k = trim(line.substr(0, eq));
    if (!k.empty()) kv[k] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Config values become flags unless given on the command line.
std::vector<std::string> merge_config(const CLI::App& app, std::vector<std::string> args) {
  std::string file;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") file = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
  if (file.empty()) return args;
  const CLI::App* sub = nullptr;
  for (const auto& a : args)
    if (!sub) sub = app.get_subcommand_no_throw(a);
  for (const auto& [k, v] : read_config(file)) {
    const std::string flag = "--" + k;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    const bool known = app.get_option_no_throw(flag) != nullptr ||
                       (sub && sub->get_option_no_throw(flag) != nullptr);
    if (known) {
      args.push_back(flag);
      args.push_back(v);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slabgff: Gaussian free field percolation on slabs", "slabgff"};
  app.set_help_flag("--help", "print help");
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();

  const char* env_out = std::getenv("SLABGFF_OUT");
  std::string out = env_out ? env_out : ".";
  int threads = 0;
  std::uint64_t seed = 1;
  std::string config;
  app.add_option("--out", out, "output directory (default $SLABGFF_OUT or .)");
  app.add_option("--threads", threads, "worker count (default: available parallelism)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--config", config, "flat key=value file; flags take precedence");

  std::int64_t N = 32, M = 0, R = 16;
  int h = 1;
  std::size_t samples = 1000;

  auto* green = app.add_subcommand("green", "Green's function against the Dirichlet oracle");
  std::string points_file;
  std::int64_t box = 0;
  green->add_option("--N", N)->required();
  green->add_option("--h", h)->required();
  green->add_option("--points", points_file, "file of y1 y2 z triples")->required();
  green->add_option("--box", box, "oracle box radius (default max(4N, 2 max norm))");

  auto* cap = app.add_subcommand("cap", "capacity of a region or named shape");
  std::string region_file, shape, method = "hitting";
  bool write_measure = false;
  cap->add_option("--N", N)->required();
  cap->add_option("--h", h)->required();
  cap->add_option("--region", region_file, "file of y1 y2 z triples");
  cap->add_option("--shape", shape)->check(CLI::IsMember({"line", "ball", "disk"}));
  cap->add_option("--R", R);
  cap->add_option("--method", method)->check(CLI::IsMember({"hitting", "green", "variational"}));
  cap->add_flag("--measure", write_measure, "also write the equilibrium measure CSV");

  auto* sample = app.add_subcommand("sample", "one field sample and its origin cluster");
  std::uint64_t index = 0;
  std::int64_t window = 8;
  sample->add_option("--N", N)->required();
  sample->add_option("--h", h)->required();
  sample->add_option("--M", M);
  sample->add_option("--index", index, "sample index");
  sample->add_option("--window", window, "half-width of the written window");

  auto* onearm = app.add_subcommand("onearm", "one-arm probability estimate");
  onearm->add_option("--N", N)->required();
  onearm->add_option("--h", h)->required();
  onearm->add_option("--R", R)->required();
  onearm->add_option("--M", M);
  onearm->add_option("--samples", samples);

  auto* caplaw = app.add_subcommand("caplaw", "cluster capacity tail against the arctan law");
  bool vertex = false;
  caplaw->add_option("--N", N)->required();
  caplaw->add_option("--h", h)->required();
  caplaw->add_option("--M", M);
  caplaw->add_option("--samples", samples);
  caplaw->add_flag("--vertex", vertex, "use the vertex trace instead of the cable cluster");

  auto* plateau = app.add_subcommand("plateau", "predicted 1/theta against h");
  std::vector<int> hs{1, 2, 4, 8, 16, 32, 64, 128};
  plateau->add_option("--N", N)->required();
  plateau->add_option("--hs", hs)->delimiter(',');

  auto* bands = app.add_subcommand("bands", "prediction bands for a configuration");
  double g0 = 0, eps = 0.1;
  bands->add_option("--N", N)->required();
  bands->add_option("--h", h)->required();
  bands->add_option("--R", R)->required();
  bands->add_option("--g0", g0, "default: computed");
  bands->add_option("--epsilon", eps);

  auto* validate = app.add_subcommand("validate", "run validation suites");
  std::string suite = "all", scale = "quick";
  validate->add_option("suite", suite)->check(
      CLI::IsMember({"bessel", "slab", "greens", "capacity", "gff", "predictions", "all"}));
  validate->add_option("--scale", scale)->check(CLI::IsMember({"quick", "desk", "extended"}));

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    std::vector<std::string> fwd(args.rbegin(), args.rend());
    fwd = merge_config(app, fwd);
    args.assign(fwd.rbegin(), fwd.rend());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  if (threads > 0) set_default_threads(threads);

  Session s;
  s.out = out;
  s.t0 = std::chrono::steady_clock::now();
  s.manifest.command = sub->get_name();
  s.manifest.master_seed = seed;
  s.manifest.code_version = version_string();
  s.manifest.started = cli::utc_now();
  for (const auto* o : sub->get_options()) {
    if (o->count() == 0) continue;
    const auto key = o->get_lnames().empty() ? o->get_name() : o->get_lnames().front();
    if (operational(key) || key == "help") continue;
    std::string v;
    for (const auto& r : o->results()) v += (v.empty() ? "" : ",") + r;
    s.manifest.params[key] = v.empty() ? "true" : v;
  }
  s.manifest.run_id = cli::make_run_id(s.manifest.command, s.manifest.params, seed);

  try {
    fs::create_directories(s.out);
    int code = 0;
    if (sub == green) {
      const auto p = slab::SlabParams::make(N, h);
      const auto pts = slab::read_region_file(points_file, p);
      double far = 0;
      for (const auto& q : pts.points) far = std::max(far, slab::slab_norm(q, h));
      if (box <= 0) box = std::max<std::int64_t>(4 * N, std::int64_t(std::ceil(2 * far)));
      const greens::GreenEvaluator ev(p);
      const auto oracle = greens::solve_oracle(p, box);
      auto os = s.csv("green.csv");
      os << "N,h,y1,y2,z,g3,g2,g,g_oracle,rel_err\n";
      for (const auto& q : pts.points) {
        const auto g = ev.parts(q);
        const double o = oracle.at(q);
        os << N << ',' << h << ',' << q.y1 << ',' << q.y2 << ',' << q.z << ',' << g.g3 << ',' << g.g2 << ','
           << g.g() << ',' << o << ',' << std::fabs(g.g() - o) / o << '\n';
      }
    } else if (sub == cap) {
      const auto p = slab::SlabParams::make(N, h);
      slab::Region A;
      if (!region_file.empty()) A = slab::read_region_file(region_file, p);
      else if (shape == "line") A = slab::line(R, p);
      else if (shape == "ball") A = slab::ball(slab::SlabPoint{}, double(R), p);
      else if (shape == "disk") A = slab::disk(slab::SlabPoint{}, double(R), p);
      else throw PreconditionError("cap: need --region or --shape");
      const greens::GreenEvaluator ev(p);
      capacity::EquilibriumSolution e;
      if (method == "hitting") {
        e = capacity::equilibrium(A, nullptr, p);
      } else if (method == "green") {
        e = capacity::equilibrium_green(A, ev);
      } else {
        const auto v = capacity::cap_variational(A, capacity::Kernel::g(), ev);
        e.target = A;
        e.capacity = v.value;
        e.method = capacity::Method::kVariational;
        e.eq_measure = v.argmin;
        for (auto& w : e.eq_measure.weights) w *= v.value;
        e.residuals.iterations = v.iterations;
        e.residuals.solver_residual = v.kkt_residual;
        e.residuals.solver = "spectral projected gradient";
      }
      Json j;
      j["capacity"] = e.capacity;
      j["method"] = capacity::method_name(e.method);
      j["residuals"] = {{"iterations", e.residuals.iterations},
                        {"solver_residual", e.residuals.solver_residual},
                        {"mass_defect", e.residuals.mass_defect},
                        {"box_margin", e.residuals.box_margin},
                        {"solver", e.residuals.solver}};
      j["params"] = {{"N", N}, {"h", h}, {"points", A.size()}};
      s.json("cap.json", j);
      if (write_measure) {
        auto os = s.csv("equilibrium.csv");
        os << "y1,y2,z,weight\n";
        const auto& pts = e.eq_measure.support.points;
        for (std::size_t i = 0; i < pts.size(); ++i)
          os << pts[i].y1 << ',' << pts[i].y2 << ',' << pts[i].z << ',' << e.eq_measure.weights[i] << '\n';
      }
    } else if (sub == sample) {
      const auto p = slab::SlabParams::make(N, h);
      const auto bx = gff::TorusBox::make(M > 0 ? M : 8 * N, p);
      const auto f = gff::sample_field(bx, seed, index);
      const auto c = gff::explore_origin_cluster(f, seed);
      auto os = s.csv("field.csv");
      os << "y1,y2,z,phi\n";
      for (std::int64_t a = -window; a <= window; ++a)
        for (std::int64_t b = -window; b <= window; ++b)
          for (int z = 0; z < h; ++z) os << a << ',' << b << ',' << z << ',' << f.at(slab::SlabPoint{a, b, z}) << '\n';
      s.json("sample.json", Json{{"phi_origin", f.at(slab::SlabPoint{})},
                                 {"contains_origin", c.contains_origin},
                                 {"cluster_size", c.vertices.size()},
                                 {"max_norm", c.max_norm_reached},
                                 {"wrap_flagged", c.wrap_flagged}});
    } else if (sub == onearm) {
      const auto p = slab::SlabParams::make(N, h);
      const auto bx = gff::TorusBox::make(M > 0 ? M : 8 * N, p);
      gff::MonteCarloOptions o;
      o.threads = threads;
      const auto e = gff::one_arm(N, h, R, bx, samples, seed, o);
      Json b = Json::object();
      if (e.prediction_band.hi > 0) b["thm11"] = {e.prediction_band.lo, e.prediction_band.hi};
      if (e.flat_band) b["thm41"] = {e.flat_band->lo, e.flat_band->hi};
      s.json("onearm.json", Json{{"theta_hat", e.theta_hat}, {"stderr", e.stderr_}, {"nsamples", e.nsamples},
                                 {"flagged", e.flagged}, {"g0", e.g0}, {"bands", b}});
      const auto ledger = s.path("onearm_ledger.csv");
      const bool fresh = !fs::exists(ledger);
      std::ofstream os(ledger, std::ios::app);
      os << std::setprecision(17);
      if (fresh) os << "# run_id=" << s.manifest.run_id << "\nN,h,R,M,samples,seed,theta,stderr,lo_band,hi_band\n";
      os << N << ',' << h << ',' << R << ',' << bx.M << ',' << samples << ',' << seed << ',' << e.theta_hat << ','
         << e.stderr_ << ',' << e.prediction_band.lo << ',' << e.prediction_band.hi << '\n';
      s.manifest.outputs.push_back("onearm_ledger.csv");
    } else if (sub == caplaw) {
      const auto p = slab::SlabParams::make(N, h);
      const auto bx = gff::TorusBox::make(M > 0 ? M : 8 * N, p);
      gff::CapLawOptions o;
      o.cable = !vertex;
      o.threads = threads;
      const auto r = gff::cluster_cap_law(N, h, bx, samples, seed, o);
      auto os = s.csv("caplaw.csv");
      os << "x,empirical_tail,arctan_tail\n";
      for (const auto& row : r.rows) os << row.x << ',' << row.empirical_tail << ',' << row.arctan_tail << '\n';
    } else if (sub == plateau) {
      auto os = s.csv("plateau.csv");
      os << "h,inv_theta_pred\n";
      for (const auto& [hh, v] : predictions::plateau_table(N, hs, fitted::Constants::defaults()))
        os << hh << ',' << v << '\n';
    } else if (sub == bands) {
      const auto p = slab::SlabParams::make(N, h);
      if (!(g0 > 0)) g0 = greens::GreenEvaluator(p).g(slab::SlabPoint{});
      auto in = predictions::PredictionInput::make(N, h, double(R), g0);
      in.epsilon = eps;
      Json j{{"N", N}, {"h", h}, {"R", R}, {"g0", g0}, {"F_R", slab::f_box(double(R), p)}};
      const auto b11 = predictions::theta_band(in, predictions::BandKind::kThm11);
      j["thm11"] = {{"lo", b11.lo}, {"hi", b11.hi}, {"label", b11.label}};
      if (double(N) > std::max<double>(double(R), h)) {
        j["s_star"] = predictions::s_star(in);
        j["flat"] = predictions::flatness_holds(in);
        if (predictions::flatness_holds(in)) {
          const auto b41 = predictions::theta_band(in, predictions::BandKind::kThm41);
          j["thm41"] = {{"lo", b41.lo}, {"hi", b41.hi}, {"label", b41.label}};
        }
      }
      s.json("bands.json", j);
    } else if (sub == validate) {
      validation::Options o;
      o.scale = validation::parse_scale(scale);
      o.threads = threads;
      o.seed = seed;
      o.log = &std::cerr;
      validation::Runner runner(o);
      const auto recs = runner.run_suite(suite);
      for (const auto& r : recs)
        std::cout << validation::status_name(r.status) << ' ' << r.id << ' ' << r.title << ' '
                  << r.measured.dump() << (r.message.empty() ? "" : " " + r.message) << '\n';
      s.json("validate.json", validation::report_json(recs, o));
      if (!validation::all_passed(recs)) code = kExitValidate;
    }
    s.finish();
    return code;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const NumericError& e) {
    std::cerr << "numeric: " << e.what() << (e.diagnostics().empty() ? "" : " (" + e.diagnostics() + ")") << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
