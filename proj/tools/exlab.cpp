#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "exlab/experiments.hpp"
#include "exlab/parallel.hpp"
#include "exlab/quadrature.hpp"
#include "exlab/states.hpp"

namespace {

// file < EXLAB_SEED < explicit command line flags
exlab::ExperimentConfig resolve_config(const std::string& name, CLI::App* sub,
                                       const std::vector<std::pair<std::string, CLI::Option*>>& opts,
                                       const std::string& config_path) {
  exlab::ExperimentConfig cfg = exlab::default_config(name);
  if (!config_path.empty()) {
    const auto file = exlab::ExperimentConfig::load(config_path);
    for (const auto& [k, v] : file.kv) {
      if (!cfg.has(k)) throw std::invalid_argument("config file: unknown key " + k);
      cfg.kv[k] = v;
    }
  }
  if (const char* env = std::getenv("EXLAB_SEED")) cfg.kv["seed"] = env;
  for (const auto& [key, opt] : opts) {
    if (opt->count() > 0) cfg.kv[key] = opt->results().front();
  }
  (void)sub;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exclusion-process laboratory"};
  app.require_subcommand(1);

  int threads = 0;
  std::string outdir = "out";
  app.add_option("--threads", threads, "worker pool size (0 = hardware)");
  app.add_option("--out", outdir, "output directory");

  struct SubState {
    CLI::App* sub;
    std::string config_path;
    std::vector<std::pair<std::string, CLI::Option*>> opts;
  };
  std::vector<SubState> subs;

  for (const std::string& name : exlab::experiment_names()) {
    auto* sub = app.add_subcommand(name);
    SubState st;
    st.sub = sub;
    sub->add_option("--config", st.config_path, "key-value config file");
    for (const auto& [key, value] : exlab::default_config(name).kv) {
      auto* opt = sub->add_option("--" + key);
      opt->expected(1);
      opt->default_str(value);
      st.opts.emplace_back(key, opt);
    }
    subs.push_back(std::move(st));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exlab::kUsage;
  }

  exlab::set_default_threads(threads);

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i].sub->parsed()) {
        const std::string& name = exlab::experiment_names()[i];
        const auto cfg = resolve_config(name, subs[i].sub, subs[i].opts, subs[i].config_path);
        return exlab::run_experiment(name, cfg, outdir);
      }
    }
  } catch (const exlab::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return exlab::kCapacity;
  } catch (const exlab::QuadratureError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return exlab::kCheckFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return exlab::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exlab::kUsage;
  }
  return exlab::kUsage;
}
