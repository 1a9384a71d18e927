#include "translab/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace translab {

namespace {

constexpr const char* kHeader = "# translator-field v1";

double parse_real(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw std::runtime_error("bad real in field file: '" + token + "'");
  return v;
}

int parse_int(const std::string& token) {
  std::size_t used = 0;
  const int v = std::stoi(token, &used);
  if (used != token.size()) throw std::runtime_error("bad integer in field file: '" + token + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field(std::ostream& out, const HeightField& f) {
  const GridDomain& g = f.domain();
  out << kHeader << '\n';
  out << g.nx() << ' ' << g.ny() << ' ' << format_real(g.x0()) << ' ' << format_real(g.y0()) << ' '
      << format_real(g.dx()) << ' ' << format_real(g.dy()) << '\n';
  out << "shape " << describe(g.shape()) << '\n';
  std::string line;
  for (int j = 0; j < g.ny(); ++j) {
    line.clear();
    for (int i = 0; i < g.nx(); ++i) {
      if (i) line += ' ';
      line += format_real(f(i, j));
    }
    out << line << '\n';
  }
}

void write_field(const std::filesystem::path& path, const HeightField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field(out, f);
}

HeightField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader) {
    throw std::runtime_error("missing '# translator-field v1' header");
  }
  if (!std::getline(in, line)) throw std::runtime_error("missing grid line");
  std::istringstream grid_line(line);
  std::string t_nx, t_ny, t_x0, t_y0, t_dx, t_dy, extra;
  if (!(grid_line >> t_nx >> t_ny >> t_x0 >> t_y0 >> t_dx >> t_dy) || (grid_line >> extra)) {
    throw std::runtime_error("grid line must be 'nx ny x0 y0 dx dy'");
  }
  const int nx = parse_int(t_nx);
  const int ny = parse_int(t_ny);

  if (!std::getline(in, line)) throw std::runtime_error("missing shape line");
  std::istringstream shape_line(line);
  std::string word, kind;
  shape_line >> word >> kind;
  if (word != "shape") throw std::runtime_error("shape line must start with 'shape'");
  std::vector<double> params;
  std::string tok;
  while (shape_line >> tok) params.push_back(parse_real(tok));
  ShapeMeta shape;
  if (kind == "Rectangle" && params.size() == 2) {
    shape = RectangleShape{params[0], params[1]};
  } else if (kind == "Annulus" && params.size() == 4) {
    shape = AnnulusShape{params[0], params[1], params[2], params[3]};
  } else {
    throw std::runtime_error("unknown shape line: '" + line + "'");
  }

  GridDomain domain = GridDomain::from_layout(nx, ny, parse_real(t_x0), parse_real(t_y0),
                                              parse_real(t_dx), parse_real(t_dy), shape);
  std::vector<double> values(domain.size());
  for (int j = 0; j < ny; ++j) {
    if (!std::getline(in, line)) throw std::runtime_error("field file ends early");
    std::istringstream row(line);
    for (int i = 0; i < nx; ++i) {
      if (!(row >> tok)) throw std::runtime_error("short row in field file");
      const double v = parse_real(tok);
      const bool exterior = domain.tag(i, j) == NodeTag::Exterior;
      if (exterior != std::isnan(v)) {
        throw std::runtime_error("nan pattern does not match the shape mask");
      }
      values[domain.index(i, j)] = v;
    }
    if (row >> tok) throw std::runtime_error("long row in field file");
  }
  return HeightField(std::move(domain), std::move(values));
}

HeightField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field(in);
}

void write_key_values(const std::filesystem::path& path, const KeyValues& kv) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string s = trim(line.substr(0, line.find('#')));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::runtime_error("expected 'key = value': " + s);
    kv.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return kv;
}

}  // namespace translab
