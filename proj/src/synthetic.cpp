#include "wicksell/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "wicksell/errors.hpp"
#include "wicksell/format.hpp"
#include "wicksell/rng.hpp"
#include "wicksell/transform.hpp"

namespace wicksell {
namespace {

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t i = 0;
  const auto is_delim = [](char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\r' || c == ';';
  };
  while (i < line.size()) {
    while (i < line.size() && is_delim(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_delim(line[i])) ++i;
    if (i > start) cells.push_back(line.substr(start, i - start));
  }
  return cells;
}

std::optional<double> parse_cell(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

CenterMode parse_center_mode(const std::string& name) {
  if (name == "origin") return CenterMode::Origin;
  if (name == "centroid") return CenterMode::Centroid;
  throw InvalidInput("center mode must be 'origin' or 'centroid', got '" +
                     name + "'");
}

std::string to_string(CenterMode mode) {
  return mode == CenterMode::Origin ? "origin" : "centroid";
}

std::string SampleSet::describe() const {
  std::ostringstream os;
  if (const auto* s = std::get_if<SyntheticSource>(&provenance)) {
    os << "synthetic model=" << s->model << " seed=" << s->seed;
  } else if (const auto* o = std::get_if<ObservationFile>(&provenance)) {
    os << "file=" << o->path;
  } else {
    const auto& f = std::get<IngestedSource>(provenance);
    os << "ingested file=" << f.path << " center=" << to_string(f.center)
       << " (" << format_double(f.center_x) << ", "
       << format_double(f.center_y) << ")";
  }
  os << " n=" << z_values.size();
  return os.str();
}

SampleSet sample_observables(const TrueModel& model, std::size_t n,
                             std::uint64_t seed) {
  if (n == 0) throw InvalidInput("sample size must be at least 1");
  RandomStream rng = Seed(seed).stream();
  std::vector<double> z(n);
  for (double& value : z) {
    const double x = model.quantile(rng.uniform());
    const double u = rng.uniform();
    value = (1.0 - u * u) * x;
  }
  return {std::move(z), SyntheticSource{model.spec(), seed}};
}

SampleSet ingest_positions(const std::filesystem::path& path,
                           CenterMode center) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<double> xs;
  std::vector<double> ys;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto cells = split_cells(line);
    if (cells.size() < 2) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected two columns, found " +
                        std::to_string(cells.size()));
    }
    const auto x = parse_cell(cells[0]);
    const auto y = parse_cell(cells[1]);
    if (!seen_content && !x && !y) {
      seen_content = true;  // header
      continue;
    }
    seen_content = true;
    if (!x || !y) {
      const std::string_view bad = x ? cells[1] : cells[0];
      throw ParseError(line_no, "not a number: '" + std::string(bad) + "'");
    }
    xs.push_back(*x);
    ys.push_back(*y);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
  if (xs.empty()) throw FormatError(path.string() + " contains no positions");

  double cx = 0.0;
  double cy = 0.0;
  if (center == CenterMode::Centroid) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cx += xs[i];
      cy += ys[i];
    }
    cx /= static_cast<double>(xs.size());
    cy /= static_cast<double>(ys.size());
  }
  std::vector<double> z(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    z[i] = dx * dx + dy * dy;
  }
  return {std::move(z), IngestedSource{path.string(), center, cx, cy}};
}

SampleSet read_observables(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> z;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto cells = split_cells(line);
    const auto value = parse_cell(cells.front());
    if (!value && !seen_content) {
      seen_content = true;  // header
      continue;
    }
    seen_content = true;
    if (!value) {
      throw ParseError(line_no,
                       "not a number: '" + std::string(cells.front()) + "'");
    }
    if (*value < 0.0) throw ParseError(line_no, "observations must be >= 0");
    z.push_back(*value);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
  if (z.empty()) throw FormatError(path.string() + " contains no observations");
  return {std::move(z), ObservationFile{path.string()}};
}

TabulatedCdf read_tabulated_cdf(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> xs;
  std::vector<double> fs;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto cells = split_cells(line);
    if (cells.size() < 2) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected columns x and F");
    }
    const auto x = parse_cell(cells[0]);
    const auto f = parse_cell(cells[1]);
    if (!seen_content && !x && !f) {
      seen_content = true;
      continue;
    }
    seen_content = true;
    if (!x || !f) throw ParseError(line_no, "not a number");
    xs.push_back(*x);
    fs.push_back(*f);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
  return TabulatedCdf(std::move(xs), std::move(fs));
}

TrueModel parse_model_spec(const std::string& spec) {
  const std::string prefix = "table:";
  if (spec.rfind(prefix, 0) == 0) {
    return TrueModel::tabulated(read_tabulated_cdf(spec.substr(prefix.size())));
  }
  return TrueModel::parse(spec);
}

double g0_exponential(double rate, double z) {
  if (!(z > 0.0)) throw InvalidInput("g0 needs z > 0");
  const double h = 0.5 * rate * z;
  return 0.5 * rate * std::exp(-h) * boost::math::cyl_bessel_k(0, h);
}

ModelTruth model_truth(const TrueModel& model, double x,
                       const QuadOptions& options) {
  if (!(x >= 0.0)) throw InvalidInput("model_truth needs x >= 0");
  if (const auto* e = std::get_if<ExponentialFamily>(&model.family())) {
    return {model.cdf(x), v0_exponential(e->rate, x),
            x > 0.0 ? g0_exponential(e->rate, x)
                    : std::numeric_limits<double>::infinity()};
  }
  const double g0 = x > 0.0 ? forward_density(model, x, options)
                            : std::numeric_limits<double>::infinity();
  return {model.cdf(x), v0_oracle(model, x, options), g0};
}

}  // namespace wicksell
