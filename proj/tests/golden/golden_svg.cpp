// Compares rendered SVGs with the stored files. Pass --update to rewrite them.

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "annulus/io.hpp"
#include "annulus/render.hpp"

using namespace annulus;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: golden_svg DATA_DIR GOLDEN_DIR [--update]\n";
    return 2;
  }
  const std::string data = argv[1], golden = argv[2];
  const bool update = argc > 3 && std::strcmp(argv[3], "--update") == 0;

  auto graph = [&](const char* f) { return io::graph_from_json(io::read_json(data + "/" + f)); };
  auto system = [&](const char* f) { return io::system_from_json(io::read_json(data + "/" + f)); };
  struct Case {
    std::string name;
    std::string svg;
  };
  std::vector<Case> cases{
      {"L-graph.svg", render_svg(graph("L.json"), {1, true})},
      {"L-graph-3.svg", render_svg(graph("L.json"), {3, true})},
      {"M-system-3.svg", render_svg(system("M-system.json"), {3, true})},
      {"M-system-1.svg", render_svg(system("M-system.json"), {1, true})},
      {"fig_c-cone4.svg", render_svg(graph("fig_c.json"), {4, true})},
  };

  int bad = 0;
  for (const auto& c : cases) {
    const std::string path = golden + "/" + c.name;
    if (update) {
      std::ofstream(path, std::ios::binary) << c.svg;
      std::cout << "wrote " << path << "\n";
      continue;
    }
    if (slurp(path) != c.svg) {
      std::cout << "FAIL " << c.name << " differs from " << path << "\n";
      ++bad;
    } else {
      std::cout << "ok   " << c.name << "\n";
    }
  }
  return bad ? 1 : 0;
}
