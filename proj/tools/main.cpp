// Copyright 2026 The geomgate Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "geomgate/experiments.hpp"

namespace {

using geomgate::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBand = 4;

std::string resolve_output_dir(const ExperimentConfig& cfg,
                               const std::string& flag_out) {
  if (!flag_out.empty()) return flag_out;
  if (const char* env = std::getenv("GEOMGATE_OUT"); env && *env) return env;
  return cfg.output;
}

void write_files(const geomgate::ExperimentResult& result,
                 const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : result.files) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    std::cout << "wrote " << path.string() << "\n";
  }
}

int cmd_run(const std::string& config_path, const std::string& flag_out,
            int flag_workers, bool check_bands) {
  ExperimentConfig cfg;
  try {
    cfg = geomgate::config_from_file(config_path);
    if (flag_workers >= 0) cfg.workers = flag_workers;
    const auto diags = geomgate::validate(cfg);
    if (!diags.empty()) {
      std::cerr << "config error(s):\n";
      for (const auto& d : diags) std::cerr << "  - " << d << "\n";
      return kExitConfig;
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto result = geomgate::run_experiment(cfg);
    write_files(result, resolve_output_dir(cfg, flag_out));
    std::cout << result.summary << "\n";
    for (const auto& line : result.band_lines) std::cout << line << "\n";
    if (check_bands && !result.band_pass) {
      std::cerr << "acceptance band check failed\n";
      return kExitBand;
    }
    return kExitOk;
  } catch (const geomgate::IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cmd_validate(const std::string& config_path) {
  try {
    const auto cfg = geomgate::config_from_file(config_path);
    const auto diags = geomgate::validate(cfg);
    if (diags.empty()) {
      std::cout << "config ok: " << geomgate::experiment_name(cfg.experiment)
                << "\n";
      return kExitOk;
    }
    for (const auto& d : diags) std::cout << "diagnostic: " << d << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_pulses(const std::string& config_path, const std::string& flag_out,
               int samples) {
  ExperimentConfig cfg;
  try {
    cfg = geomgate::config_from_file(config_path);
    cfg.schedule.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::ostringstream csv;
  csv << "t,re_omega1,im_omega1,re_omega2,im_omega2,delta,lambda\n";
  const double total = cfg.schedule.total_time;
  for (int i = 0; i <= samples; ++i) {
    const double t = total * i / samples;
    const auto d = geomgate::drive_pair(t, cfg.schedule);
    csv << geomgate::format_sig(t) << ','
        << geomgate::format_sig(d.omega1.real()) << ','
        << geomgate::format_sig(d.omega1.imag()) << ','
        << geomgate::format_sig(d.omega2.real()) << ','
        << geomgate::format_sig(d.omega2.imag()) << ','
        << geomgate::format_sig(d.delta) << ','
        << geomgate::format_sig(d.lambda_cd) << '\n';
  }

  const std::string dir = resolve_output_dir(cfg, flag_out);
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / "pulses.csv";
  std::ofstream out(path, std::ios::binary);
  out << csv.str();
  std::cout << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_dump_hamiltonian(const std::string& scheme_name,
                         const std::string& frame_name, double time,
                         double total_time, double theta, double psi,
                         double phi1, double phi2, bool tqd, double V,
                         double g1, double g2, bool master) {
  using geomgate::Frame;
  using geomgate::Scheme;

  geomgate::SchemeConfig scheme;
  if (scheme_name == "single") {
    scheme.scheme = Scheme::SingleThreeLevel;
  } else if (scheme_name == "blockade") {
    scheme.scheme = Scheme::BlockadePair;
  } else if (scheme_name == "mediated") {
    scheme.scheme = Scheme::Mediated;
  } else {
    std::cerr << "config error: unknown scheme " << scheme_name << "\n";
    return kExitConfig;
  }
  scheme.frame = frame_name == "effective" ? Frame::Effective : Frame::Full;
  scheme.V = V;
  scheme.g1 = g1;
  scheme.g2 = g2;

  geomgate::PulseSchedule schedule;
  schedule.total_time = total_time;
  schedule.theta = theta;
  schedule.psi = psi;
  schedule.phi1 = phi1;
  schedule.phi2 = phi2;
  schedule.tqd_enabled = tqd;

  try {
    const auto sh = geomgate::scheme_hamiltonian(scheme, schedule, master);
    const geomgate::Matrix h = sh.h(time);

    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < h.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < h.cols(); ++j) {
        row.push_back({h(i, j).real(), h(i, j).imag()});
      }
      rows.push_back(row);
    }
    nlohmann::json out = {{"scheme", scheme_name},
                          {"frame", frame_name},
                          {"time", time},
                          {"dim", h.rows()},
                          {"matrix", rows}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geomgate: geometric-gate loop simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string flag_out;
  int flag_workers = -1;
  bool check_bands = false;
  int samples = 1000;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "TOML config file")->required();
  run->add_option("--out", flag_out, "output directory");
  run->add_option("--workers", flag_workers, "worker threads (0 = all cores)");
  run->add_flag("--check", check_bands,
                "exit 4 when the experiment's acceptance band fails");

  auto* validate = app.add_subcommand("validate", "check a config, run nothing");
  validate->add_option("config", config_path, "TOML config file")->required();

  auto* pulses = app.add_subcommand("pulses", "dump the drive waveforms");
  pulses->add_option("config", config_path, "TOML config file")->required();
  pulses->add_option("--out", flag_out, "output directory");
  pulses->add_option("--samples", samples, "number of waveform samples");

  std::string scheme_name = "single";
  std::string frame_name = "full";
  double time = 0.0, total_time = 6.0, theta = 0.0, psi = 0.0;
  double phi1 = 0.0, phi2 = 0.0, V = 100.0, g1 = 100.0, g2 = 100.0;
  bool tqd = true, master = false;
  auto* dump = app.add_subcommand("dump-hamiltonian",
                                  "print one Hamiltonian sample as JSON");
  dump->add_option("--scheme", scheme_name, "single | blockade | mediated");
  dump->add_option("--frame", frame_name, "effective | full");
  dump->add_option("--time", time, "sample time")->required();
  dump->add_option("--T", total_time, "loop time");
  dump->add_option("--theta", theta, "theta");
  dump->add_option("--psi", psi, "psi");
  dump->add_option("--phi1", phi1, "phi1");
  dump->add_option("--phi2", phi2, "phi2");
  dump->add_flag("--tqd,!--no-tqd", tqd, "counterdiabatic drive on/off");
  dump->add_option("--V", V, "blockade interaction");
  dump->add_option("--g1", g1, "mediated coupling 1");
  dump->add_option("--g2", g2, "mediated coupling 2");
  dump->add_flag("--master", master, "use the master-equation frame");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return cmd_run(config_path, flag_out, flag_workers, check_bands);
  }
  if (validate->parsed()) {
    return cmd_validate(config_path);
  }
  if (pulses->parsed()) {
    return cmd_pulses(config_path, flag_out, samples);
  }
  if (dump->parsed()) {
    return cmd_dump_hamiltonian(scheme_name, frame_name, time, total_time,
                                theta, psi, phi1, phi2, tqd, V, g1, g2,
                                master);
  }
  return kExitOk;
}
