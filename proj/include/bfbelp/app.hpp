#pragma once

// Command implementations behind the bfbelp executable. Each returns the
// process exit status: 0 success, 1 runtime fault, 2 usage or config error.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace bfbelp::app {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Environment variable naming the directory used when --out is omitted.
constexpr const char* kOutRootEnv = "BFBELP_OUT_ROOT";

std::string default_out_dir(const std::string& leaf);

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> workers;
};

struct BatchArgs {
  std::string config;
  std::size_t trials = 10;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t workers = 1;
};

struct CompareArgs {
  std::string config;
  std::string mode = "short";
  std::string out;
  std::size_t agents = 4;
  std::size_t workers = 4;
};

struct PlotArgs {
  std::string log;
  std::string out;
};

struct ScaleArgs {
  std::string config;
  std::size_t tasks = 256;
  std::size_t workers = 4;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_batch(const BatchArgs& args, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err);
int cmd_scale(const ScaleArgs& args, std::ostream& out, std::ostream& err);

}  // namespace bfbelp::app
