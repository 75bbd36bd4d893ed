#include "invabc/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "invabc/errors.hpp"

namespace invabc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (const char c : s)
    if (c != ' ' && c != '\t' && c != '\r') out.push_back(c);
  return out;
}

bool parse_double_strict(const std::string& text, double* out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* b = t.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(b, &end);
  if (end == b || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    return false;
  *out = v;
  return true;
}

bool parse_ll_strict(const std::string& text, long long* out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* b = t.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(b, &end, 10);
  if (end == b || *end != '\0' || errno == ERANGE) return false;
  *out = v;
  return true;
}

bool parse_u64_strict(const std::string& text, std::uint64_t* out) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-') return false;
  const char* b = t.c_str();
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(b, &end, 10);
  if (end == b || *end != '\0' || errno == ERANGE) return false;
  *out = v;
  return true;
}

bool parse_bool_strict(const std::string& text, bool* out) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") {
    *out = true;
    return true;
  }
  if (t == "false" || t == "0" || t == "no") {
    *out = false;
    return true;
  }
  return false;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& key) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    double v = 0.0;
    if (!parse_double_strict(part, &v))
      throw data_error("setting '" + key + "': '" + trim(part) +
                       "' is not a number");
    out.push_back(v);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw data_error("setting '" + key + "': '" + trim(value) + "' is not " +
                   expected);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  return in;
}

std::string list_or_none(const std::vector<double>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

std::string opt_or_none(const std::optional<double>& v) {
  return v ? format_double(*v) : "none";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void apply_setting(RunSettings& s, const std::string& raw_key,
                   const std::string& value) {
  const std::string key = trim(raw_key);
  auto as_double = [&](double* out) {
    if (!parse_double_strict(value, out)) bad_value(key, value, "a number");
  };
  auto as_ll = [&](long long* out) {
    if (!parse_ll_strict(value, out)) bad_value(key, value, "an integer");
  };
  auto as_int = [&](int* out) {
    long long v = 0;
    if (!parse_ll_strict(value, &v) || v < INT_MIN || v > INT_MAX)
      bad_value(key, value, "an integer");
    *out = static_cast<int>(v);
  };
  auto as_optional = [&](std::optional<double>* out) {
    if (trim(value) == "none") {
      out->reset();
      return;
    }
    double v = 0.0;
    if (!parse_double_strict(value, &v))
      bad_value(key, value, "a number or 'none'");
    *out = v;
  };

  if (key == "iterations") {
    as_ll(&s.chain.iterations);
  } else if (key == "burn_in") {
    as_ll(&s.chain.burn_in);
  } else if (key == "seed") {
    if (!parse_u64_strict(value, &s.chain.seed))
      bad_value(key, value, "a non-negative integer");
  } else if (key == "epsilon") {
    as_double(&s.chain.epsilon);
    if (!(s.chain.epsilon >= 0.0))
      throw data_error("setting 'epsilon': must be >= 0");
  } else if (key == "kernel") {
    const std::string v = trim(value);
    if (v == "indicator")
      s.chain.kernel = KernelType::indicator;
    else if (v == "gaussian")
      s.chain.kernel = KernelType::gaussian;
    else
      bad_value(key, value, "'indicator' or 'gaussian'");
  } else if (key == "nu_update_mode") {
    const std::string v = trim(value);
    if (v == "exact_mh")
      s.chain.nu_update_mode = NuUpdateMode::exact_mh;
    else if (v == "paper_gibbs")
      s.chain.nu_update_mode = NuUpdateMode::paper_gibbs;
    else
      bad_value(key, value, "'exact_mh' or 'paper_gibbs'");
  } else if (key == "position_scale_s") {
    as_double(&s.chain.position_scale_s);
  } else if (key == "position_scale_t") {
    as_double(&s.chain.position_scale_t);
  } else if (key == "record_latents") {
    if (!parse_bool_strict(value, &s.chain.record_latents))
      bad_value(key, value, "a boolean");
  } else if (key == "fix_nu") {
    as_optional(&s.chain.fix_nu);
  } else if (key == "fix_lambda") {
    as_optional(&s.chain.fix_lambda);
  } else if (key == "fix_sigma2") {
    as_optional(&s.chain.fix_sigma2);
  } else if (key == "max_init_attempts") {
    as_ll(&s.chain.max_init_attempts);
  } else if (key == "nu_retry_cap") {
    as_int(&s.chain.nu_retry_cap);
  } else if (key == "rejection_samples") {
    as_ll(&s.chain.rejection_samples);
  } else if (key == "rejection_max_attempts") {
    as_ll(&s.chain.rejection_max_attempts);
  } else if (key == "groups") {
    as_int(&s.groups);
  } else if (key == "roads_per_group") {
    as_int(&s.roads_per_group);
  } else if (key == "road_ages") {
    s.road_ages =
        (trim(value) == "none") ? std::vector<double>{} : parse_double_list(value, key);
  } else if (key == "age_min") {
    as_int(&s.age_min);
  } else if (key == "age_max") {
    as_int(&s.age_max);
  } else if (key == "true_lambdas") {
    s.true_lambdas = parse_double_list(value, key);
    if (s.true_lambdas.empty())
      throw data_error("setting 'true_lambdas': needs at least one rate");
  } else if (key == "true_nu") {
    as_double(&s.true_nu);
  } else if (key == "true_sigma2") {
    as_double(&s.true_sigma2);
  } else if (key == "n_z") {
    as_int(&s.n_z);
  } else if (key == "oracle_lambda") {
    as_double(&s.oracle_lambda);
  } else if (key == "oracle_nu") {
    as_double(&s.oracle_nu);
  } else if (key == "oracle_age") {
    as_double(&s.oracle_age);
  } else if (key == "grid_min") {
    as_double(&s.grid_min);
  } else if (key == "grid_max") {
    as_double(&s.grid_max);
  } else if (key == "grid_points") {
    as_int(&s.grid_points);
  } else if (key == "replicates") {
    as_ll(&s.replicates);
  } else if (key == "threads") {
    as_int(&s.threads);
  } else if (key == "spacing") {
    as_double(&s.spacing);
  } else if (key == "proj_lambda") {
    as_double(&s.proj_lambda);
  } else if (key == "proj_nu") {
    as_double(&s.proj_nu);
  } else if (key == "horizon_years") {
    as_double(&s.horizon_years);
  } else {
    throw data_error("unknown setting '" + key + "'");
  }
}

RunSettings parse_config_text(const std::string& text,
                              const std::string& origin) {
  RunSettings s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw data_error(origin + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw data_error(origin + ":" + std::to_string(line_no) +
                       ": setting '" + key + "' given twice");
    try {
      apply_setting(s, key, value);
    } catch (const data_error& e) {
      throw data_error(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return s;
}

RunSettings parse_config(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string render_settings(const RunSettings& s) {
  std::ostringstream out;
  out << "iterations = " << s.chain.iterations << "\n";
  out << "burn_in = " << s.chain.burn_in << "\n";
  out << "seed = " << s.chain.seed << "\n";
  out << "epsilon = " << format_double(s.chain.epsilon) << "\n";
  out << "kernel = "
      << (s.chain.kernel == KernelType::indicator ? "indicator" : "gaussian")
      << "\n";
  out << "nu_update_mode = "
      << (s.chain.nu_update_mode == NuUpdateMode::exact_mh ? "exact_mh"
                                                           : "paper_gibbs")
      << "\n";
  out << "position_scale_s = " << format_double(s.chain.position_scale_s) << "\n";
  out << "position_scale_t = " << format_double(s.chain.position_scale_t) << "\n";
  out << "record_latents = " << (s.chain.record_latents ? "true" : "false")
      << "\n";
  out << "fix_nu = " << opt_or_none(s.chain.fix_nu) << "\n";
  out << "fix_lambda = " << opt_or_none(s.chain.fix_lambda) << "\n";
  out << "fix_sigma2 = " << opt_or_none(s.chain.fix_sigma2) << "\n";
  out << "max_init_attempts = " << s.chain.max_init_attempts << "\n";
  out << "nu_retry_cap = " << s.chain.nu_retry_cap << "\n";
  out << "rejection_samples = " << s.chain.rejection_samples << "\n";
  out << "rejection_max_attempts = " << s.chain.rejection_max_attempts << "\n";
  out << "groups = " << s.groups << "\n";
  out << "roads_per_group = " << s.roads_per_group << "\n";
  out << "road_ages = " << list_or_none(s.road_ages) << "\n";
  out << "age_min = " << s.age_min << "\n";
  out << "age_max = " << s.age_max << "\n";
  out << "true_lambdas = " << list_or_none(s.true_lambdas) << "\n";
  out << "true_nu = " << format_double(s.true_nu) << "\n";
  out << "true_sigma2 = " << format_double(s.true_sigma2) << "\n";
  out << "n_z = " << s.n_z << "\n";
  out << "oracle_lambda = " << format_double(s.oracle_lambda) << "\n";
  out << "oracle_nu = " << format_double(s.oracle_nu) << "\n";
  out << "oracle_age = " << format_double(s.oracle_age) << "\n";
  out << "grid_min = " << format_double(s.grid_min) << "\n";
  out << "grid_max = " << format_double(s.grid_max) << "\n";
  out << "grid_points = " << s.grid_points << "\n";
  out << "replicates = " << s.replicates << "\n";
  out << "threads = " << s.threads << "\n";
  out << "spacing = " << format_double(s.spacing) << "\n";
  out << "proj_lambda = " << format_double(s.proj_lambda) << "\n";
  out << "proj_nu = " << format_double(s.proj_nu) << "\n";
  out << "horizon_years = " << format_double(s.horizon_years) << "\n";
  return out.str();
}

std::vector<RoadRecord> parse_transect_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw data_error(path + ": no records");
  if (strip_spaces(line) != "group,road,age,y1,y2,y3,y4,y5,y6")
    throw data_error(path + ":1: header must be 'group,road,age,y1,y2,y3,y4,y5,y6'");

  std::vector<RoadRecord> roads;
  std::set<std::pair<int, int>> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 9)
      throw data_error(where + "expected 9 fields, got " +
                       std::to_string(fields.size()));
    long long group = 0, road = 0;
    double age = 0.0;
    if (!parse_ll_strict(fields[0], &group) || group < 1)
      throw data_error(where + "group must be a positive integer");
    if (!parse_ll_strict(fields[1], &road))
      throw data_error(where + "road must be an integer");
    if (!parse_double_strict(fields[2], &age))
      throw data_error(where + "age must be a number");
    RoadRecord rec;
    rec.group = static_cast<int>(group);
    rec.road_index = static_cast<int>(road);
    rec.age_T = age;
    try {
      rec.validate();
    } catch (const std::invalid_argument& e) {
      throw data_error(where + e.what());
    }
    Pattern6 p = 0;
    for (int j = 0; j < 6; ++j) {
      const std::string y = trim(fields[static_cast<std::size_t>(3 + j)]);
      if (y == "1")
        p |= static_cast<Pattern6>(1u << (5 - j));
      else if (y != "0")
        throw data_error(where + "y" + std::to_string(j + 1) +
                         " must be 0 or 1, got '" + y + "'");
    }
    rec.observed = p;
    if (!seen.insert({rec.group, rec.road_index}).second)
      throw data_error(where + "duplicate (group, road) = (" +
                       std::to_string(rec.group) + ", " +
                       std::to_string(rec.road_index) + ")");
    roads.push_back(rec);
  }
  if (roads.empty()) throw data_error(path + ": no records");
  return roads;
}

void write_transect_csv(const std::string& path,
                        const std::vector<RoadRecord>& roads) {
  auto out = open_out(path);
  out << "group,road,age,y1,y2,y3,y4,y5,y6\n";
  for (const auto& r : roads) {
    out << r.group << "," << r.road_index << "," << format_double(r.age_T);
    for (int j = 0; j < 6; ++j)
      out << "," << (((r.observed >> (5 - j)) & 1u) ? "1" : "0");
    out << "\n";
  }
}

TemporalData parse_temporal(const std::string& path,
                            std::vector<std::string>* warnings) {
  auto in = open_in(path);
  TemporalData temporal;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    double v = 0.0;
    if (!parse_double_strict(line, &v))
      throw data_error(path + ":" + std::to_string(line_no) + ": '" + line +
                       "' is not a number");
    if (v < 0.0 && warnings)
      warnings->push_back(path + ":" + std::to_string(line_no) +
                          ": negative spread rate " + format_double(v) +
                          " kept (model support is all reals)");
    temporal.z.push_back(v);
  }
  if (temporal.z.size() < 2)
    throw data_error(path + ": need at least two temporal observations");
  return temporal;
}

void write_temporal(const std::string& path, const TemporalData& temporal) {
  auto out = open_out(path);
  for (const double v : temporal.z) out << format_double(v) << "\n";
}

Dataset assemble_dataset(std::vector<RoadRecord> roads, TemporalData temporal) {
  if (roads.empty()) throw data_error("dataset: no roads");
  int ng = 0;
  for (const auto& r : roads) ng = std::max(ng, r.group);
  std::vector<int> count(static_cast<std::size_t>(ng), 0);
  for (const auto& r : roads) ++count[static_cast<std::size_t>(r.group) - 1];
  for (int g = 0; g < ng; ++g)
    if (count[static_cast<std::size_t>(g)] == 0)
      throw data_error("dataset: group " + std::to_string(g + 1) +
                       " has no roads; groups must be numbered 1..G");
  Dataset ds;
  ds.roads = std::move(roads);
  ds.temporal = std::move(temporal);
  ds.n_groups = ng;
  return ds;
}

RoadNetwork parse_network_csv(const std::string& path) {
  auto in = open_in(path);
  RoadNetwork net;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() < 6 || (fields.size() - 2) % 2 != 0)
      throw data_error(where +
                       "expected 'id,age,x0,y0,x1,y1,...' with at least two points");
    Segment seg;
    if (!parse_ll_strict(fields[0], &seg.id))
      throw data_error(where + "id must be an integer");
    if (!parse_double_strict(fields[1], &seg.age) || !(seg.age > 0.0))
      throw data_error(where + "age must be a positive number");
    for (std::size_t i = 2; i + 1 < fields.size(); i += 2) {
      double x = 0.0, y = 0.0;
      if (!parse_double_strict(fields[i], &x) ||
          !parse_double_strict(fields[i + 1], &y))
        throw data_error(where + "coordinates must be numbers");
      seg.polyline.emplace_back(x, y);
    }
    net.segments.push_back(std::move(seg));
  }
  if (net.segments.empty()) throw data_error(path + ": no segments");
  return net;
}

void write_network_csv(const std::string& path, const RoadNetwork& network) {
  auto out = open_out(path);
  for (const auto& seg : network.segments) {
    out << seg.id << "," << format_double(seg.age);
    for (const auto& [x, y] : seg.polyline)
      out << "," << format_double(x) << "," << format_double(y);
    out << "\n";
  }
}

HabitatRaster parse_habitat(const std::string& path) {
  auto in = open_in(path);
  HabitatRaster r;
  std::string word;
  double v = 0.0;
  auto need = [&](const char* expect) {
    if (!(in >> word) || word != expect)
      throw data_error(path + ": expected '" + expect + "' in header");
  };
  auto need_num = [&](const char* what) {
    if (!(in >> word) || !parse_double_strict(word, &v))
      throw data_error(path + ": bad " + std::string(what) + " in header");
    return v;
  };
  need("origin");
  r.origin_x = need_num("origin x");
  r.origin_y = need_num("origin y");
  need("cell_size");
  r.cell_size = need_num("cell size");
  need("dims");
  r.width = static_cast<int>(need_num("width"));
  r.height = static_cast<int>(need_num("height"));
  if (r.width < 1 || r.height < 1 || r.width > 100000 || r.height > 100000)
    throw data_error(path + ": unreasonable grid dims");
  r.cells.reserve(static_cast<std::size_t>(r.width) *
                  static_cast<std::size_t>(r.height));
  for (int row = 0; row < r.height; ++row) {
    if (!(in >> word) || static_cast<int>(word.size()) != r.width)
      throw data_error(path + ": raster row " + std::to_string(row + 1) +
                       " must have exactly " + std::to_string(r.width) +
                       " digits");
    for (const char c : word) {
      if (c != '0' && c != '1')
        throw data_error(path + ": raster cells must be 0 or 1");
      r.cells.push_back(c == '1' ? 1 : 0);
    }
  }
  r.validate();
  return r;
}

void write_habitat(const std::string& path, const HabitatRaster& raster) {
  raster.validate();
  auto out = open_out(path);
  out << "origin " << format_double(raster.origin_x) << " "
      << format_double(raster.origin_y) << "\n";
  out << "cell_size " << format_double(raster.cell_size) << "\n";
  out << "dims " << raster.width << " " << raster.height << "\n";
  for (int row = 0; row < raster.height; ++row) {
    for (int col = 0; col < raster.width; ++col)
      out << (raster.suitable(row, col) ? '1' : '0');
    out << "\n";
  }
}

std::uint64_t fnv1a_file(const std::string& path) {
  auto in = open_in(path);
  std::uint64_t h = 14695981039346656037ULL;
  char buf[65536];
  for (;;) {
    in.read(buf, sizeof buf);
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof buf)) break;
  }
  return h;
}

void write_histogram_svg(const std::string& path, const std::string& title,
                         const std::vector<double>& values, int bins) {
  if (values.empty())
    throw std::invalid_argument("write_histogram_svg: empty sample");
  if (bins < 1) throw std::invalid_argument("write_histogram_svg: bins >= 1");
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  double lo = *mn_it, hi = *mx_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<long long> count(static_cast<std::size_t>(bins), 0);
  for (const double x : values) {
    auto b = static_cast<long long>((x - lo) / (hi - lo) * bins);
    b = std::clamp<long long>(b, 0, bins - 1);
    ++count[static_cast<std::size_t>(b)];
  }
  const long long peak = *std::max_element(count.begin(), count.end());

  const int w = 640, h = 400, m_left = 50, m_bottom = 40, m_top = 34, m_right = 16;
  const double plot_w = w - m_left - m_right;
  const double plot_h = h - m_top - m_bottom;
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << m_left << "\" y=\"20\" font-family=\"monospace\" "
         "font-size=\"14\">"
      << title << "</text>\n";
  for (int b = 0; b < bins; ++b) {
    const double frac =
        (peak > 0)
            ? static_cast<double>(count[static_cast<std::size_t>(b)]) /
                  static_cast<double>(peak)
            : 0.0;
    const double bar_h = frac * plot_h;
    const double x = m_left + b * plot_w / bins;
    const double y = m_top + (plot_h - bar_h);
    out << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y)
        << "\" width=\"" << format_double(plot_w / bins * 0.92)
        << "\" height=\"" << format_double(bar_h)
        << "\" fill=\"#4878a8\"/>\n";
  }
  out << "<line x1=\"" << m_left << "\" y1=\"" << (h - m_bottom) << "\" x2=\""
      << (w - m_right) << "\" y2=\"" << (h - m_bottom)
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << m_left << "\" y=\"" << (h - m_bottom + 18)
      << "\" font-family=\"monospace\" font-size=\"12\">" << format_double(lo)
      << "</text>\n";
  out << "<text x=\"" << (w - m_right) << "\" y=\"" << (h - m_bottom + 18)
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
      << format_double(hi) << "</text>\n";
  out << "<text x=\"" << (m_left - 6) << "\" y=\"" << (m_top + 12)
      << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
      << peak << "</text>\n";
  out << "</svg>\n";
}

void write_mask_svg(const std::string& path, const HabitatRaster& habitat,
                    const std::vector<std::uint8_t>& invaded) {
  habitat.validate();
  if (invaded.size() != habitat.cells.size())
    throw std::invalid_argument("write_mask_svg: mask shape mismatch");
  const int cell_px = std::max(1, 600 / std::max(habitat.width, habitat.height));
  const int w = habitat.width * cell_px, h = habitat.height * cell_px;
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  // run-length merge rows so the file stays compact
  auto emit_runs = [&](bool want_invaded, const char* color) {
    for (int row = 0; row < habitat.height; ++row) {
      int col = 0;
      while (col < habitat.width) {
        const std::size_t idx =
            static_cast<std::size_t>(row) * static_cast<std::size_t>(habitat.width) +
            static_cast<std::size_t>(col);
        const bool on = want_invaded ? invaded[idx] != 0
                                     : (habitat.cells[idx] != 0 && invaded[idx] == 0);
        if (!on) {
          ++col;
          continue;
        }
        int end = col + 1;
        while (end < habitat.width) {
          const std::size_t j =
              static_cast<std::size_t>(row) * static_cast<std::size_t>(habitat.width) +
              static_cast<std::size_t>(end);
          const bool on2 = want_invaded ? invaded[j] != 0
                                        : (habitat.cells[j] != 0 && invaded[j] == 0);
          if (!on2) break;
          ++end;
        }
        out << "<rect x=\"" << col * cell_px << "\" y=\"" << row * cell_px
            << "\" width=\"" << (end - col) * cell_px << "\" height=\""
            << cell_px << "\" fill=\"" << color << "\"/>\n";
        col = end;
      }
    }
  };
  emit_runs(false, "#cfe3cf");  // suitable, not invaded
  emit_runs(true, "#222222");   // invaded
  out << "</svg>\n";
}

}  // namespace invabc
