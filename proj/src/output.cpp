#include "rtrap/output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rtrap/error.hpp"

namespace rtrap {

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

std::string trajectories_csv(const ModelInstance& model, const SweepResult& sweep) {
  const auto& t = sweep.trajectories;
  std::string out = kTrajectoryHeader;
  out += '\n';
  out.reserve(out.size() + t.grid_size() * t.states * 96);
  for (std::size_t g = 0; g < t.grid_size(); ++g) {
    const std::string a = format_double(t.alphaGrid[g]);
    for (std::size_t k = 0; k < t.states; ++k) {
      const cplx l = t.at(g, k);
      out += a;
      out += ',';
      out += std::to_string(model.index_of(k));
      for (double v : {l.real(), l.imag(), -l.imag(), sweep.npc_at(g, k), sweep.norm_at(g, k)}) {
        out += ',';
        out += format_double(v);
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<TrajectoryRow> parse_trajectories_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<TrajectoryRow> rows;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1) {
      if (line != kTrajectoryHeader) throw Error(ErrorCode::Validation, "unexpected CSV header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t b = 0;
    for (;;) {
      const auto c = line.find(',', b);
      f.push_back(line.substr(b, c == std::string::npos ? std::string::npos : c - b));
      if (c == std::string::npos) break;
      b = c + 1;
    }
    if (f.size() != 7) throw Error(ErrorCode::Validation, "line " + std::to_string(n) + ": expected 7 fields");
    auto num = [&](const std::string& s) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw Error(ErrorCode::Validation, "line " + std::to_string(n) + ": bad number '" + s + "'");
      }
      return v;
    };
    TrajectoryRow r;
    r.alpha = num(f[0]);
    r.state = std::stoi(f[1]);
    r.reLambda = num(f[2]);
    r.imLambda = num(f[3]);
    r.gammaHalf = num(f[4]);
    r.npc = num(f[5]);
    r.normSq = num(f[6]);
    rows.push_back(r);
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Validation, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::Validation, "write to '" + path + "' failed");
}

}  // namespace rtrap
