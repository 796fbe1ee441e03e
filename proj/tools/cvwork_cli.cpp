// Command-line front end: classification, work, sweeps, red dots, transitions
// and the Monte-Carlo check.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments,
// 3 nonphysical input where physicality is required, 4 numerical failure.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvwork/cvwork.hpp"

namespace {

using namespace cvwork;

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotPhysical = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPhysical: return kExitNotPhysical;
    case ErrorCode::IoError: return kExitIo;
    case ErrorCode::InvalidArgument:
    case ErrorCode::NonSymmetricInput:
    case ErrorCode::DomainError:
    case ErrorCode::BadRange:
    case ErrorCode::NonDiagonalInput:
    case ErrorCode::NonPositiveVariance:
    case ErrorCode::InsufficientSamples: return kExitUsage;
    default: return kExitNumerical;
  }
}

const std::map<std::string, ProtocolKind> kProtocols{{"homx", ProtocolKind::HomodyneX},
                                                     {"homp", ProtocolKind::HomodyneP},
                                                     {"hom", ProtocolKind::HomodyneAverage},
                                                     {"het", ProtocolKind::Heterodyne}};
const std::map<std::string, BoundaryKind> kBoundaries{{"sep", BoundaryKind::Separability},
                                                      {"steer", BoundaryKind::NonsteerabilityBtoA},
                                                      {"phys", BoundaryKind::Physicality}};
const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}};

template <typename T>
std::vector<std::string> keys(const std::map<std::string, T>& m) {
  std::vector<std::string> out;
  for (const auto& kv : m) out.push_back(kv.first);
  return out;
}

void print_value(const std::string& key, double v) { std::cout << key << '=' << format_real(v) << '\n'; }
void print_value(const std::string& key, bool v) { std::cout << key << '=' << int(v) << '\n'; }

struct ParamArgs {
  StandardFormParams p;
  void add_to(CLI::App* cmd) {
    cmd->add_option("--a", p.a, "Alice's diagonal variance")->required();
    cmd->add_option("--b", p.b, "Bob's diagonal variance")->required();
    cmd->add_option("--c1", p.c1, "x-x correlation")->required();
    cmd->add_option("--c2", p.c2, "p-p correlation")->required();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally extractable work of two-mode Gaussian states"};
  app.require_subcommand(1);

  // classify
  ParamArgs classify_args;
  bool classify_json = false;
  auto* classify_cmd = app.add_subcommand("classify", "Physicality, separability and steerability flags");
  classify_args.add_to(classify_cmd);
  classify_cmd->add_flag("--json", classify_json, "Print a JSON object");

  // work
  ParamArgs work_args;
  std::string work_protocol_name;
  std::vector<double> work_outcome{0.0, 0.0};
  bool work_trace = false;
  bool work_json = false;
  auto* work_cmd = app.add_subcommand("work", "Extractable work of one protocol");
  work_args.add_to(work_cmd);
  work_cmd->add_option("--protocol", work_protocol_name)->required()->check(CLI::IsMember(keys(kProtocols)));
  work_cmd->add_option("--outcome", work_outcome, "Measurement outcome X,P")->delimiter(',')->expected(2);
  work_cmd->add_flag("--trace", work_trace, "Print the full trajectory as JSON");
  work_cmd->add_flag("--json", work_json, "Print a JSON object");

  // sweep
  std::string sweep_mode;
  double sweep_a = 0.0, sweep_b = 0.0;
  double a_min = 1.0, a_max = 5.0, c_min = 0.0, c_max = 5.0;
  double c1_min = 0.0, c1_max = 0.0, c2_min = 0.0, c2_max = 0.0;
  std::vector<std::size_t> grid_spec;
  std::string sweep_protocol_name = "het";
  std::string sweep_out;
  std::string sweep_format_name = "csv";
  bool sweep_verify = false;
  unsigned sweep_threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid of classification flags and works");
  sweep_cmd->add_option("--mode", sweep_mode)->required()->check(CLI::IsMember({"symmetric", "quadrant"}));
  sweep_cmd->add_option("--a", sweep_a, "a (quadrant mode)");
  sweep_cmd->add_option("--b", sweep_b, "b (quadrant mode)");
  sweep_cmd->add_option("--a-min", a_min, "lower a (symmetric mode)");
  sweep_cmd->add_option("--a-max", a_max, "upper a (symmetric mode)");
  sweep_cmd->add_option("--c-min", c_min, "lower c (symmetric mode)");
  sweep_cmd->add_option("--c-max", c_max, "upper c (symmetric mode)");
  sweep_cmd->add_option("--c1-min", c1_min);
  sweep_cmd->add_option("--c1-max", c1_max);
  sweep_cmd->add_option("--c2-min", c2_min);
  sweep_cmd->add_option("--c2-max", c2_max);
  sweep_cmd->add_option("--grid", grid_spec, "N[,M] points per axis")->required()->delimiter(',')->expected(1, 2);
  sweep_cmd->add_option("--protocol", sweep_protocol_name)->check(CLI::IsMember(keys(kProtocols)));
  sweep_cmd->add_option("--out", sweep_out, "Output file, - for stdout")->required();
  sweep_cmd->add_option("--format", sweep_format_name)->check(CLI::IsMember(keys(kFormats)));
  sweep_cmd->add_flag("--verify", sweep_verify, "Cross-check 1% of rows against trajectories");
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");

  // boundary
  double bnd_a = 0.0, bnd_b = 0.0;
  std::string bnd_kind_name;
  std::string bnd_protocol_name;
  bool bnd_json = false;
  auto* boundary_cmd = app.add_subcommand("boundary", "Maximum work along a class boundary");
  boundary_cmd->add_option("--a", bnd_a)->required();
  boundary_cmd->add_option("--b", bnd_b)->required();
  boundary_cmd->add_option("--kind", bnd_kind_name)->required()->check(CLI::IsMember(keys(kBoundaries)));
  boundary_cmd->add_option("--protocol", bnd_protocol_name)->required()->check(CLI::IsMember(keys(kProtocols)));
  boundary_cmd->add_flag("--json", bnd_json);

  // transition
  double tr_a = 0.0, tr_fix_b = 0.0;
  std::string tr_protocol_name;
  auto* transition_cmd = app.add_subcommand("transition", "Where the separability red dot jumps to an edge");
  auto* tr_a_opt = transition_cmd->add_option("--a", tr_a, "Fix a and scan b");
  auto* tr_b_opt = transition_cmd->add_option("--fix-b", tr_fix_b, "Fix b and scan a");
  tr_a_opt->excludes(tr_b_opt);
  transition_cmd->add_option("--protocol", tr_protocol_name)->required()->check(CLI::IsMember(keys(kProtocols)));

  // steer-vanish
  double sv_a = 0.0;
  auto* vanish_cmd = app.add_subcommand("steer-vanish", "b at which Bob->Alice steerable states disappear");
  vanish_cmd->add_option("--a", sv_a)->required();

  // mc
  ParamArgs mc_args;
  std::string mc_protocol_name;
  std::size_t mc_samples = 0;
  std::uint64_t mc_seed = 0;
  bool mc_json = false;
  unsigned mc_threads = 0;
  auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo estimate of the protocol work");
  mc_args.add_to(mc_cmd);
  mc_cmd->add_option("--protocol", mc_protocol_name)->required()->check(CLI::IsMember(keys(kProtocols)));
  mc_cmd->add_option("--samples", mc_samples)->required();
  mc_cmd->add_option("--seed", mc_seed)->required();
  mc_cmd->add_flag("--json", mc_json);
  mc_cmd->add_option("--threads", mc_threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    auto protocol_of = [](const std::string& name) { return kProtocols.at(name); };
    const ProtocolKind work_protocol = work_protocol_name.empty() ? ProtocolKind::Heterodyne : protocol_of(work_protocol_name);
    const ProtocolKind sweep_protocol = protocol_of(sweep_protocol_name);
    const ProtocolKind bnd_protocol = bnd_protocol_name.empty() ? ProtocolKind::Heterodyne : protocol_of(bnd_protocol_name);
    const ProtocolKind tr_protocol = tr_protocol_name.empty() ? ProtocolKind::Heterodyne : protocol_of(tr_protocol_name);
    const ProtocolKind mc_protocol = mc_protocol_name.empty() ? ProtocolKind::Heterodyne : protocol_of(mc_protocol_name);
    const BoundaryKind bnd_kind = bnd_kind_name.empty() ? BoundaryKind::Separability : kBoundaries.at(bnd_kind_name);
    const Format sweep_format = kFormats.at(sweep_format_name);

    if (*classify_cmd) {
      const ClassRecord c = classify(classify_args.p);
      if (classify_json) {
        std::cout << to_json(c).dump() << '\n';
      } else {
        print_value("physical", c.physical);
        print_value("separable", c.separable);
        print_value("steerable_b_to_a", c.steerable_b_to_a);
        print_value("steerable_a_to_b", c.steerable_a_to_b);
      }
    } else if (*work_cmd) {
      const StandardFormParams& p = work_args.p;
      const double w = work(p, work_protocol);
      const Vec2 outcome(work_outcome[0], work_outcome[1]);
      json out{{"protocol", std::string(to_string(work_protocol))}, {"work", w}};
      if (work_trace) {
        if (work_protocol == ProtocolKind::HomodyneAverage) {
          out["trajectory_x"] = to_json(run_protocol(p, ProtocolKind::HomodyneX, outcome));
          out["trajectory_p"] = to_json(run_protocol(p, ProtocolKind::HomodyneP, outcome));
        } else {
          out["trajectory"] = to_json(run_protocol(p, work_protocol, outcome));
        }
      }
      if (work_json || work_trace)
        std::cout << out.dump(2) << '\n';
      else
        print_value("work", w);
    } else if (*sweep_cmd) {
      Grid grid{grid_spec.at(0), grid_spec.size() > 1 ? grid_spec[1] : grid_spec[0]};
      SweepOptions opts{sweep_protocol, sweep_verify, sweep_threads};
      std::vector<SweepRow> rows;
      if (sweep_mode == "symmetric") {
        rows = sweep_symmetric({a_min, a_max}, {c_min, c_max}, grid, opts);
      } else {
        if (sweep_cmd->count("--a") == 0 || sweep_cmd->count("--b") == 0)
          throw Error(ErrorCode::InvalidArgument, "quadrant mode requires --a and --b");
        rows = sweep_quadrant(sweep_a, sweep_b, {c1_min, c1_max}, {c2_min, c2_max}, grid, opts);
      }
      emit(rows, sweep_format, sweep_out);
    } else if (*boundary_cmd) {
      const RedDot d = red_dot(bnd_a, bnd_b, bnd_kind, bnd_protocol);
      if (bnd_json) {
        std::cout << to_json(d).dump() << '\n';
      } else {
        std::cout << "boundary=" << to_string(d.boundary) << '\n';
        print_value("c1_star", d.c1_star);
        print_value("c2_star", d.c2_star);
        print_value("w_star", d.w_star);
        print_value("at_edge", d.at_edge);
      }
    } else if (*transition_cmd) {
      if (tr_a_opt->count() > 0)
        print_value("b", find_transition_b(tr_a, tr_protocol));
      else if (tr_b_opt->count() > 0)
        print_value("a", find_transition_a(tr_fix_b, tr_protocol));
      else
        throw Error(ErrorCode::InvalidArgument, "transition requires --a or --fix-b");
    } else if (*vanish_cmd) {
      print_value("b", find_steer_vanish_b(sv_a));
    } else if (*mc_cmd) {
      const auto est = mc::mc_work(mc_args.p, mc_protocol, mc_samples, mc_seed, mc_threads);
      if (mc_json) {
        std::cout << to_json(est).dump() << '\n';
      } else {
        print_value("mean_work", est.mean_work);
        print_value("stderr", est.standard_error);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
