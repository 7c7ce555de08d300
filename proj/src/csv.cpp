#include "lazyabc/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace lazyabc {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("malformed number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("malformed integer: '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text) {
  if (text == "0") return false;
  if (text == "1") return true;
  throw ConfigError("malformed flag (want 0 or 1): '" + std::string(text) + "'");
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot write file: " + path.string());
  }
  return out;
}

std::ifstream open_for_read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read file: " + path.string());
  }
  return in;
}

// Counts consecutive header columns named `<prefix>1..<prefix>n`
// starting at `pos`; advances pos past them.
std::size_t count_prefixed(const std::vector<std::string>& header,
                           std::size_t& pos, const std::string& prefix) {
  std::size_t n = 0;
  while (pos < header.size() &&
         header[pos] == prefix + std::to_string(n + 1)) {
    ++n;
    ++pos;
  }
  return n;
}

void expect_column(const std::vector<std::string>& header, std::size_t& pos,
                   const std::string& name, const fs::path& path) {
  if (pos >= header.size() || header[pos] != name) {
    throw ConfigError(path.string() + ": header mismatch, expected column '" +
                      name + "'");
  }
  ++pos;
}

[[noreturn]] void row_error(const fs::path& path, std::size_t row,
                            const std::string& what) {
  throw ConfigError(path.string() + ": row " + std::to_string(row) + ": " + what);
}

}  // namespace

void write_draws_csv(const fs::path& path,
                     const std::vector<WeightedDraw>& draws,
                     std::size_t param_dim) {
  auto out = open_for_write(path);
  out << "index";
  for (std::size_t j = 1; j <= param_dim; ++j) {
    out << ",theta_" << j;
  }
  out << ",weight,l_abc,a,stopped_early,t1_seconds,t2_seconds,seed_index\n";
  std::size_t index = 0;
  for (const auto& d : draws) {
    if (d.failed) {
      continue;
    }
    if (d.theta.size() != param_dim) {
      throw std::invalid_argument("draw theta dimension mismatch");
    }
    out << index;
    for (double v : d.theta) {
      out << ',' << format_double(v);
    }
    out << ',' << format_double(d.weight) << ',' << format_double(d.l_abc)
        << ',' << format_double(d.continuation_prob) << ','
        << (d.stopped_early ? '1' : '0') << ','
        << format_double(d.t1_seconds) << ',' << format_double(d.t2_seconds)
        << ',' << d.seed_index << '\n';
    ++index;
  }
}

DrawsFile read_draws_csv(const fs::path& path) {
  auto in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path.string() + ": empty file");
  }
  const auto header = split_row(line);
  std::size_t pos = 0;
  expect_column(header, pos, "index", path);
  DrawsFile file;
  file.param_dim = count_prefixed(header, pos, "theta_");
  if (file.param_dim == 0) {
    throw ConfigError(path.string() + ": no theta columns");
  }
  for (const char* name :
       {"weight", "l_abc", "a", "stopped_early", "t1_seconds", "t2_seconds",
        "seed_index"}) {
    expect_column(header, pos, name, path);
  }
  if (pos != header.size()) {
    throw ConfigError(path.string() + ": trailing header columns");
  }

  const std::size_t n_fields = header.size();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    const auto fields = split_row(line);
    if (fields.size() != n_fields) {
      row_error(path, row, "expected " + std::to_string(n_fields) +
                               " fields, got " + std::to_string(fields.size()));
    }
    try {
      WeightedDraw d;
      std::size_t f = 1;  // skip index
      d.theta.resize(file.param_dim);
      for (std::size_t j = 0; j < file.param_dim; ++j) {
        d.theta[j] = parse_double(fields[f++]);
      }
      d.weight = parse_double(fields[f++]);
      d.l_abc = parse_double(fields[f++]);
      d.continuation_prob = parse_double(fields[f++]);
      d.stopped_early = parse_bool(fields[f++]);
      d.t1_seconds = parse_double(fields[f++]);
      d.t2_seconds = parse_double(fields[f++]);
      d.seed_index = parse_u64(fields[f++]);
      file.draws.push_back(std::move(d));
    } catch (const ConfigError& e) {
      row_error(path, row, e.what());
    }
  }
  return file;
}

void write_training_csv(const fs::path& path,
                        const std::vector<TrainingRecord>& records,
                        std::size_t param_dim, std::size_t phi_dim) {
  auto out = open_for_write(path);
  out << "index";
  for (std::size_t j = 1; j <= param_dim; ++j) {
    out << ",theta_" << j;
  }
  for (std::size_t j = 1; j <= phi_dim; ++j) {
    out << ",phi_" << j;
  }
  out << ",l_abc,t1_seconds,t2_seconds,prior_density,proposal_density,seed_index\n";
  std::size_t index = 0;
  for (const auto& r : records) {
    if (r.theta.size() != param_dim || r.phi.size() != phi_dim) {
      throw std::invalid_argument("training record dimension mismatch");
    }
    out << index;
    for (double v : r.theta) {
      out << ',' << format_double(v);
    }
    for (double v : r.phi) {
      out << ',' << format_double(v);
    }
    out << ',' << format_double(r.l_abc) << ',' << format_double(r.t1_seconds)
        << ',' << format_double(r.t2_seconds) << ','
        << format_double(r.prior_density) << ','
        << format_double(r.proposal_density) << ',' << r.seed_index << '\n';
    ++index;
  }
}

TrainingFile read_training_csv(const fs::path& path) {
  auto in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path.string() + ": empty file");
  }
  const auto header = split_row(line);
  std::size_t pos = 0;
  expect_column(header, pos, "index", path);
  TrainingFile file;
  file.param_dim = count_prefixed(header, pos, "theta_");
  file.phi_dim = count_prefixed(header, pos, "phi_");
  if (file.param_dim == 0 || file.phi_dim == 0) {
    throw ConfigError(path.string() + ": missing theta or phi columns");
  }
  for (const char* name : {"l_abc", "t1_seconds", "t2_seconds",
                           "prior_density", "proposal_density", "seed_index"}) {
    expect_column(header, pos, name, path);
  }
  if (pos != header.size()) {
    throw ConfigError(path.string() + ": trailing header columns");
  }

  const std::size_t n_fields = header.size();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    const auto fields = split_row(line);
    if (fields.size() != n_fields) {
      row_error(path, row, "expected " + std::to_string(n_fields) +
                               " fields, got " + std::to_string(fields.size()));
    }
    try {
      TrainingRecord r;
      std::size_t f = 1;
      r.theta.resize(file.param_dim);
      for (std::size_t j = 0; j < file.param_dim; ++j) {
        r.theta[j] = parse_double(fields[f++]);
      }
      r.phi.resize(file.phi_dim);
      for (std::size_t j = 0; j < file.phi_dim; ++j) {
        r.phi[j] = parse_double(fields[f++]);
      }
      r.l_abc = parse_double(fields[f++]);
      r.t1_seconds = parse_double(fields[f++]);
      r.t2_seconds = parse_double(fields[f++]);
      r.prior_density = parse_double(fields[f++]);
      r.proposal_density = parse_double(fields[f++]);
      r.seed_index = parse_u64(fields[f++]);
      file.records.push_back(std::move(r));
    } catch (const ConfigError& e) {
      row_error(path, row, e.what());
    }
  }
  return file;
}

YearlyData read_yearly_csv(const fs::path& path) {
  auto in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path.string() + ": empty file");
  }
  const std::size_t n_locations = split_row(line).size();
  YearlyData data;
  data.n_locations = n_locations;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    const auto fields = split_row(line);
    if (fields.size() != n_locations) {
      row_error(path, row, "expected " + std::to_string(n_locations) + " fields");
    }
    try {
      for (const auto& f : fields) {
        data.values.push_back(parse_double(f));
      }
    } catch (const ConfigError& e) {
      row_error(path, row, e.what());
    }
    ++data.n_years;
  }
  if (data.n_years == 0) {
    throw ConfigError(path.string() + ": no data rows");
  }
  return data;
}

void write_yearly_csv(const fs::path& path, const YearlyData& data) {
  auto out = open_for_write(path);
  for (std::size_t d = 0; d < data.n_locations; ++d) {
    out << (d == 0 ? "" : ",") << "loc_" << d;
  }
  out << '\n';
  for (std::size_t t = 0; t < data.n_years; ++t) {
    for (std::size_t d = 0; d < data.n_locations; ++d) {
      out << (d == 0 ? "" : ",") << format_double(data.at(t, d));
    }
    out << '\n';
  }
}

}  // namespace lazyabc
