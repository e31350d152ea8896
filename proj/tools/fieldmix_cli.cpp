#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fieldmix/config.hpp"
#include "fieldmix/errors.hpp"
#include "fieldmix/experiment.hpp"

namespace {

// Options shared by every subcommand; each mirrors a config key.
const std::vector<std::pair<std::string, std::string>> kOptions = {
    {"model", "model name"},
    {"graph", "graph file or generator spec"},
    {"lambda", "external field"},
    {"delta", "target spectral independence slack"},
    {"theta", "field-dynamics parameter or grid"},
    {"q", "random-cluster parameter"},
    {"alpha", "DPP exponent"},
    {"beta", "two-spin edge weight for (1,1)"},
    {"gamma", "two-spin edge weight for (0,0)"},
    {"b", "b-matching capacity"},
    {"seed", "random seed"},
    {"format", "json or csv"},
    {"filter", "criterion filter for verify-suite"},
    {"n", "vertex count"},
    {"degree", "vertex degree"},
    {"steps", "chain length"},
    {"chains", "number of independent chains"},
    {"thin", "thinning interval"},
    {"kind", "glauber or field"},
    {"samples", "sampled conditionings for check"},
    {"kernel", "DPP kernel CSV path or random:N:RANK"},
    {"signature", "Holant signature, e.g. 1,2,4,8 (';' separates vertices)"},
    {"probabilities", "product-measure marginals"},
    {"matroid", "graphic or uniform:N:R"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Glauber and field dynamics on downward-closed set families"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  bool inject_fault = false;
  std::map<std::string, std::string> values;

  const std::vector<std::string> tasks = {"gen-graph", "check", "exact", "sample", "mix", "verify-suite"};
  for (const auto& task : tasks) {
    CLI::App* sub = app.add_subcommand(task);
    sub->add_option("--config", config_path, "INI configuration file");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    for (const auto& [key, help] : kOptions) sub->add_option("--" + key, values[key], help);
    if (task == "verify-suite") sub->add_flag("--inject-fault", inject_fault, "perturb one kernel row");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string task = app.get_subcommands().front()->get_name();

  try {
    fieldmix::Settings settings;
    if (!config_path.empty()) settings = fieldmix::Settings::from_ini_file(config_path);
    for (const auto& [key, value] : values)
      if (app.get_subcommands().front()->count("--" + key) > 0) settings.set("flag." + key, value);
    if (inject_fault) settings.set("flag.inject-fault", "true");
    if (out_path.empty() && settings.lookup(task, "out")) out_path = *settings.lookup(task, "out");

    const fieldmix::TaskOutcome outcome = fieldmix::run_task(task, settings);
    if (out_path.empty()) {
      std::cout << outcome.body;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw fieldmix::ConfigError("cannot write '" + out_path + "'");
      out << outcome.body;
    }
    return outcome.exit_code;
  } catch (const fieldmix::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fieldmix::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
