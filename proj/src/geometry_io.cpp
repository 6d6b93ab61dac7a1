#include "igaplate/geometry_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "igaplate/error.hpp"

namespace igaplate {

namespace {

struct Token {
  std::string_view text;
  int column = 1;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
      if (i >= raw.size()) break;
      const std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') ++i;
      line.tokens.push_back({raw.substr(start, i - start), static_cast<int>(start) + 1});
    }
    const bool comment = !line.tokens.empty() && line.tokens.front().text.front() == '#';
    if (!line.tokens.empty() && !comment) out.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

double to_double(const Line& line, const Token& tok) {
  double v = 0.0;
  const auto* first = tok.text.data();
  const auto* last = first + tok.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError(line.number, tok.column, "expected a number, got '" + std::string(tok.text) + "'");
  return v;
}

int to_int(const Line& line, const Token& tok) {
  int v = 0;
  const auto* first = tok.text.data();
  const auto* last = first + tok.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError(line.number, tok.column, "expected an integer, got '" + std::string(tok.text) + "'");
  return v;
}

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool done() const { return next_ >= lines_.size(); }
  int last_line() const { return lines_.empty() ? 1 : lines_.back().number; }

  const Line& take(std::string_view what) {
    if (done()) throw ParseError(last_line() + 1, 1, "unexpected end of input, expected " + std::string(what));
    return lines_[next_++];
  }

  const Line& keyword(std::string_view kw) {
    const Line& line = take(kw);
    if (line.tokens.front().text != kw)
      throw ParseError(line.number, line.tokens.front().column,
                       "expected '" + std::string(kw) + "', got '" + std::string(line.tokens.front().text) + "'");
    return line;
  }

 private:
  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

KnotVector read_knots(const Line& line, int degree) {
  if (line.tokens.size() < 2)
    throw ParseError(line.number, line.tokens.front().column + static_cast<int>(line.tokens.front().text.size()),
                     "knot vector is empty");
  std::vector<double> values;
  for (std::size_t k = 1; k < line.tokens.size(); ++k) {
    const double v = to_double(line, line.tokens[k]);
    if (!values.empty() && v < values.back())
      throw ParseError(line.number, line.tokens[k].column,
                       "knot index " + std::to_string(k - 1) + " decreases (" + std::string(line.tokens[k].text) + ")");
    values.push_back(v);
  }
  try {
    return validate_knot_vector(values, degree);
  } catch (const Error& e) {
    throw ParseError(line.number, line.tokens.front().column, e.what());
  }
}

void format_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

std::vector<SurfacePatch> parse_geometry(std::string_view text) {
  Reader in(split_lines(text));
  const Line& head = in.take("header");
  if (head.tokens.size() != 2 || head.tokens[0].text != "igaplate-geometry" || head.tokens[1].text != "v1")
    throw ParseError(head.number, 1, "expected header 'igaplate-geometry v1'");

  std::vector<SurfacePatch> patches;
  while (!in.done()) {
    in.keyword("patch");
    const Line& deg = in.keyword("degrees");
    if (deg.tokens.size() != 3) throw ParseError(deg.number, 1, "degrees needs two integers");
    const int p = to_int(deg, deg.tokens[1]);
    const int q = to_int(deg, deg.tokens[2]);
    if (p < 1 || q < 1) throw ParseError(deg.number, deg.tokens[p < 1 ? 1 : 2].column, "degree must be at least 1");

    SurfacePatch patch;
    patch.knots_u = read_knots(in.keyword("knots_u"), p);
    patch.knots_v = read_knots(in.keyword("knots_v"), q);
    const int n = patch.knots_u.num_basis(), m = patch.knots_v.num_basis();
    patch.net.n = n;
    patch.net.m = m;
    patch.net.points.resize(static_cast<std::size_t>(n * m));
    patch.net.weights.resize(static_cast<std::size_t>(n * m));

    const Line& pts = in.keyword("points");
    if (pts.tokens.size() != 1) throw ParseError(pts.number, pts.tokens[1].column, "unexpected text after 'points'");
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) {
        const Line& row = in.take("control point");
        if (row.tokens.size() != 4) {
          const int col = row.tokens.size() > 4 ? row.tokens[4].column : 1;
          throw ParseError(row.number, col, "control point needs x y z w (" + std::to_string(n * m) + " expected)");
        }
        const auto k = static_cast<std::size_t>(patch.net.index(i, j));
        patch.net.points[k] = {to_double(row, row.tokens[0]), to_double(row, row.tokens[1]),
                               to_double(row, row.tokens[2])};
        patch.net.weights[k] = to_double(row, row.tokens[3]);
        if (!(patch.net.weights[k] > 0.0)) throw ParseError(row.number, row.tokens[3].column, "weight must be positive");
      }
    const Line& end = in.keyword("end");
    if (end.tokens.size() != 1) throw ParseError(end.number, end.tokens[1].column, "unexpected text after 'end'");
    validate_patch(patch);
    patches.push_back(std::move(patch));
  }
  if (patches.empty()) throw ParseError(head.number + 1, 1, "no patches");
  return patches;
}

std::string format_geometry(const std::vector<SurfacePatch>& patches) {
  std::string out = "igaplate-geometry v1\n";
  for (const auto& patch : patches) {
    out += "patch\ndegrees " + std::to_string(patch.degree_u()) + " " + std::to_string(patch.degree_v()) + "\n";
    for (const auto* kv : {&patch.knots_u, &patch.knots_v}) {
      out += kv == &patch.knots_u ? "knots_u" : "knots_v";
      for (double v : kv->values()) {
        out += ' ';
        format_number(out, v);
      }
      out += '\n';
    }
    out += "points\n";
    for (int j = 0; j < patch.net.m; ++j)
      for (int i = 0; i < patch.net.n; ++i) {
        const auto& P = patch.net.point(i, j);
        format_number(out, P.x());
        out += ' ';
        format_number(out, P.y());
        out += ' ';
        format_number(out, P.z());
        out += ' ';
        format_number(out, patch.net.weight(i, j));
        out += '\n';
      }
    out += "end\n";
  }
  return out;
}

PatchAssembly read_geometry_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidGeometry, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return build_dof_map(parse_geometry(ss.str()));
}

void write_geometry_file(const PatchAssembly& assembly, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidGeometry, "cannot write " + path);
  out << format_geometry(assembly.patches);
}

}  // namespace igaplate
