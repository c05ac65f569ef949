// isscert: batch front end. See docs/schema.md for config and report formats.
#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cli_tasks.hpp"
#include "isscert/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace isscert;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kNumerical = 3 };

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr)) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// Write to a sibling temp file, then rename over the target.
void write_atomic(const fs::path& p, const std::string& body) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
    if (!out.flush()) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, p);
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("ISSCERT_OUT"); env && *env) return env;
  return "isscert-out";
}

std::string render_text(const json& r) {
  std::ostringstream os;
  os << "task:    " << r.value("task", "?") << "\n"
     << "status:  " << r.value("status", "?") << "\n"
     << "seed:    " << r.value("seed", json()).dump() << "\n"
     << "inputs:  " << r.value("inputs_digest", "?") << "\n"
     << "version: " << r.value("tool_version", "?") << "\n";
  for (const char* sec : {"verdicts", "margins"}) {
    if (!r.contains(sec)) continue;
    os << sec << ":\n";
    for (const auto& [k, v] : r.at(sec).items()) os << "  " << k << " = " << v.dump() << "\n";
  }
  if (r.contains("artifacts") && !r.at("artifacts").empty()) {
    os << "artifacts:";
    for (const auto& a : r.at("artifacts")) os << " " << a.get<std::string>();
    os << "\n";
  }
  return os.str();
}

int run_report(const std::string& config, const std::string& out_flag) {
  const json r = json::parse(read_file(config));
  if (!r.is_object() || !r.contains("status")) throw ConfigError("not a report: missing 'status'");
  const std::string text = render_text(r);
  const fs::path dir = out_flag.empty() ? fs::path(config).parent_path() : output_dir(out_flag);
  if (!dir.empty()) fs::create_directories(dir);
  write_atomic(dir / "report.txt", text);
  std::cout << text;
  const std::string status = r.at("status").get<std::string>();
  if (status == "pass") return kPass;
  if (status == "numerical-failure") return kNumerical;
  return kFail;
}

int run_analysis(const std::string& sub, const std::string& config, const std::string& out_flag,
                 std::optional<std::uint64_t> seed_flag, std::optional<double> tol) {
  const std::string bytes = read_file(config);
  cli::TaskContext ctx;
  ctx.config = json::parse(bytes);
  if (!ctx.config.is_object()) throw ConfigError("config must be a JSON object");
  const std::string task = ctx.config.value("task", "");
  const auto allowed = cli::tasks_for(sub);
  if (std::find(allowed.begin(), allowed.end(), task) == allowed.end()) {
    throw ConfigError("task '" + task + "' is not handled by subcommand '" + sub + "'");
  }
  if (seed_flag) {
    ctx.seed = *seed_flag;
  } else if (ctx.config.contains("seed")) {
    if (!ctx.config.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
    ctx.seed = ctx.config.at("seed").get<std::uint64_t>();
  }
  ctx.tol = tol;

  json report{{"task", task},
              {"tool_version", cli::kToolVersion},
              {"inputs_digest", "sha256:" + sha256_hex(bytes)},
              {"seed", ctx.seed},
              {"verdicts", json::object()},
              {"margins", json::object()},
              {"details", json::object()},
              {"artifacts", json::array()}};
  int code = kPass;
  cli::TaskOutcome outcome;
  try {
    outcome = cli::run_task(ctx);
    code = outcome.pass ? kPass : kFail;
    report["status"] = outcome.pass ? "pass" : "fail";
  } catch (const NumericalError& e) {
    code = kNumerical;
    report["status"] = "numerical-failure";
    report["details"] = {{"message", e.what()}, {"last_valid_time", e.last_valid_time()}};
  } catch (const InfeasibleError& e) {
    code = kFail;
    report["status"] = "fail";
    report["details"] = {{"witness", e.what()}};
  } catch (const DivergenceError& e) {
    code = kFail;
    report["status"] = "fail";
    report["details"] = {{"witness", e.what()}};
  }
  if (code != kNumerical) {
    report["verdicts"] = outcome.verdicts;
    report["margins"] = outcome.margins;
    if (!outcome.details.empty()) report["details"] = outcome.details;
  }

  const fs::path dir = output_dir(out_flag);
  fs::create_directories(dir);
  for (const auto& a : outcome.artifacts) {
    write_atomic(dir / a.name, a.body);
    report["artifacts"].push_back(a.name);
  }
  write_atomic(dir / "report.json", report.dump(2) + "\n");
  std::cout << render_text(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isscert: small-gain and ISS certificate checks"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  std::string config, out;
  std::uint64_t seed = 1;
  double tol = 0.0;
  std::string active;
  std::vector<std::pair<CLI::App*, CLI::Option*>> seed_opts, tol_opts;
  for (const char* name : {"gain", "net", "sim", "sweep", "report"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config (or report.json for `report`)")->required();
    sub->add_option("--out", out, "output directory (default $ISSCERT_OUT or ./isscert-out)");
    seed_opts.emplace_back(sub, sub->add_option("--seed", seed, "RNG seed, overrides the config"));
    tol_opts.emplace_back(sub, sub->add_option("--tol", tol, "tolerance override for the task"));
    sub->callback([&active, name] { active = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfig;
  }

  std::optional<std::uint64_t> seed_flag;
  std::optional<double> tol_flag;
  for (const auto& [sub, opt] : seed_opts) {
    if (sub->parsed() && opt->count()) seed_flag = seed;
  }
  for (const auto& [sub, opt] : tol_opts) {
    if (sub->parsed() && opt->count()) tol_flag = tol;
  }

  try {
    if (active == "report") return run_report(config, out);
    return run_analysis(active, config, out, seed_flag, tol_flag);
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const isscert::Error& e) {
    // Config, shape, domain, class, range, size, model and unsupported errors
    // all mean the input cannot be analysed as given.
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kConfig;
  }
}
