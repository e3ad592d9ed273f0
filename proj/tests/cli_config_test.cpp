// Copyright 2026 The dpftrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Exercises the CLI config-file contract: plain key=value lines provide
// defaults, explicit flags win on conflict. Usage: cli_config_test <dpftrl>.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("%s: %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

bool run(const std::string& args) {
  const std::string cmd = "\"" + g_cli + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_config_test <path-to-dpftrl>\n");
    return 1;
  }
  g_cli = argv[1];

  {
    std::ofstream cfg("cli_cfg_test.cfg");
    cfg << "# defaults for a small run\n";
    cfg << "n = 40\n";
    cfg << "lambda = 7\n";
    cfg << "seed = 5\n";
    cfg << "sigma = 0.5\n";
    cfg << "restart-every = 16\n";
    cfg << "complete-tree = true\n";
  }

  // Config-only run equals the same settings via flags.
  expect(run("train --config cli_cfg_test.cfg --out cfg_a.csv"),
         "config-only invocation succeeds");
  expect(run("train --n 40 --lambda 7 --seed 5 --sigma 0.5 "
             "--restart-every 16 --complete-tree --out cfg_b.csv"),
         "flag-only invocation succeeds");
  expect(slurp("cfg_a.csv") == slurp("cfg_b.csv") &&
             !slurp("cfg_a.csv").empty(),
         "config values act as defaults");

  // An explicit flag beats the config value.
  expect(run("train --config cli_cfg_test.cfg --lambda 9 --out cfg_c.csv"),
         "mixed invocation succeeds");
  expect(run("train --n 40 --lambda 9 --seed 5 --sigma 0.5 "
             "--restart-every 16 --complete-tree --out cfg_d.csv"),
         "reference invocation succeeds");
  expect(slurp("cfg_c.csv") == slurp("cfg_d.csv"),
         "flags win over config on conflict");
  expect(slurp("cfg_c.csv") != slurp("cfg_a.csv"),
         "the overridden lambda changes the run");

  expect(!run("train --config missing_file.cfg --out cfg_e.csv"),
         "missing config file is an error");

  for (const char* f : {"cli_cfg_test.cfg", "cfg_a.csv", "cfg_b.csv",
                        "cfg_c.csv", "cfg_d.csv"}) {
    std::remove(f);
  }
  return g_failures;
}
