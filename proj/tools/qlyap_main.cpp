// qlyap_main.cpp — command-line front end: one subcommand per experiment kind.
#include "qlyap/cli.hpp"

#include <CLI11.hpp>

#include <iterator>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov-feedback gate preparation for an open two-level system"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* blurb;
    qlyap::ExperimentKind kind;
  };
  const SubSpec specs[] = {
      {"run", "single closed-loop gate preparation run", qlyap::ExperimentKind::Run},
      {"compare", "several control laws on one model/target", qlyap::ExperimentKind::Compare},
      {"free-evolution", "uncontrolled purity decay per model kind",
       qlyap::ExperimentKind::FreeEvolution},
      {"robustness", "perturbation sweeps over control axes",
       qlyap::ExperimentKind::Robustness},
  };

  struct SubState {
    CLI::App* sub = nullptr;
    std::string config;
    std::string out;
    qlyap::ExperimentKind kind{};
  };
  std::vector<SubState> states(std::size(specs));
  for (std::size_t i = 0; i < std::size(specs); ++i) {
    states[i].kind = specs[i].kind;
    states[i].sub = app.add_subcommand(specs[i].name, specs[i].blurb);
    states[i].sub->add_option("--config", states[i].config, "experiment config (JSON)")
        ->required();
    states[i].sub->add_option("--out", states[i].out,
                              "output directory (overrides config and "
                              "QLYAP_OUT_DIR)");
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& st : states) {
    if (!st.sub->parsed()) continue;
    qlyap::cli::Options opt;
    opt.config_path = st.config;
    if (!st.out.empty()) opt.out_dir = st.out;
    return qlyap::cli::run_command(st.kind, opt);
  }
  return qlyap::cli::kExitValidation;
}
