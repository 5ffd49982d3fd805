#include "cwvsmix/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cwvsmix/errors.hpp"

namespace cwvsmix {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
    out.back().pop_back();
  }
  return out;
}

double parse_double(const std::string& field, std::size_t row,
                    const std::string& column) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw input_error("non-numeric value '" + field + "' at row " +
                      std::to_string(row) + ", column " + column);
  }
  return v;
}

struct HeaderLayout {
  std::size_t y_index = static_cast<std::size_t>(-1);
  std::vector<std::size_t> covariate_idx;
  std::vector<std::string> covariate_names;
  std::vector<std::string> pollutants;                  // first-appearance order
  std::unordered_map<std::string, std::size_t> pollutant_id;
  // exposure column -> (pollutant, period-1)
  std::vector<std::size_t> exp_idx, exp_pollutant, exp_period;
  std::size_t m = 0;
};

HeaderLayout parse_header(const std::vector<std::string>& header,
                          bool require_y) {
  HeaderLayout h;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "y") {
      if (h.y_index != static_cast<std::size_t>(-1)) {
        throw input_error("duplicate column y");
      }
      h.y_index = c;
      continue;
    }
    if (name.rfind("z_", 0) == 0) {
      const std::size_t sep = name.rfind('_');
      if (sep == 1 || sep == std::string::npos) {
        throw input_error("malformed exposure column '" + name + "'");
      }
      const std::string poll = name.substr(2, sep - 2);
      const std::string per = name.substr(sep + 1);
      if (poll.empty() || per.empty() ||
          per.find_first_not_of("0123456789") != std::string::npos) {
        throw input_error("malformed exposure column '" + name + "'");
      }
      const long period = std::stol(per);
      if (period < 1) {
        throw input_error("period index out of range in column '" + name +
                          "' (periods are 1-based)");
      }
      auto [it, inserted] =
          h.pollutant_id.try_emplace(poll, h.pollutants.size());
      if (inserted) h.pollutants.push_back(poll);
      h.exp_idx.push_back(c);
      h.exp_pollutant.push_back(it->second);
      h.exp_period.push_back(static_cast<std::size_t>(period - 1));
      h.m = std::max(h.m, static_cast<std::size_t>(period));
      continue;
    }
    h.covariate_idx.push_back(c);
    h.covariate_names.push_back(name);
  }
  if (require_y && h.y_index == static_cast<std::size_t>(-1)) {
    throw input_error("missing column y");
  }
  if (h.exp_idx.empty()) throw input_error("no exposure columns (z_*)");
  // Complete grid check.
  const std::size_t q = h.pollutants.size();
  std::vector<int> seen(q * h.m, 0);
  for (std::size_t k = 0; k < h.exp_idx.size(); ++k) {
    int& cell = seen[h.exp_pollutant[k] * h.m + h.exp_period[k]];
    if (cell) {
      throw input_error("duplicate exposure column z_" +
                        h.pollutants[h.exp_pollutant[k]] + "_" +
                        std::to_string(h.exp_period[k] + 1));
    }
    cell = 1;
  }
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t t = 0; t < h.m; ++t) {
      if (!seen[j * h.m + t]) {
        throw input_error("missing exposure column z_" + h.pollutants[j] +
                          "_" + std::to_string(t + 1));
      }
    }
  }
  return h;
}

}  // namespace

namespace {

ExposureDataset ingest_stream(std::istream& in, const std::string& path,
                              bool standardize, bool require_y) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("empty file '" + path + "'");
  const std::vector<std::string> header = split_line(line);
  const HeaderLayout h = parse_header(header, require_y);
  const bool has_y = h.y_index != static_cast<std::size_t>(-1);

  std::vector<std::vector<std::string>> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw input_error("row " + std::to_string(row_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    rows.push_back(std::move(fields));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw input_error("no data rows in '" + path + "'");

  ExposureDataset data;
  data.pollutant_names = h.pollutants;
  data.covariate_names.reserve(h.covariate_names.size() + 1);
  data.covariate_names.push_back("(intercept)");
  for (const auto& c : h.covariate_names) data.covariate_names.push_back(c);

  data.y.resize(n);
  data.x = Matrix(n, 1 + h.covariate_idx.size());
  data.z = ExposureTensor(n, h.m, h.pollutants.size());

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t file_row = i + 2;  // 1-based, after header
    if (has_y) {
      const double yv = parse_double(rows[i][h.y_index], file_row, "y");
      if (yv != 0.0 && yv != 1.0) {
        throw input_error("non-binary outcome at row " +
                          std::to_string(file_row));
      }
      data.y[i] = static_cast<int>(yv);
    } else {
      data.y[i] = 0;
    }
    data.x(i, 0) = 1.0;
    for (std::size_t c = 0; c < h.covariate_idx.size(); ++c) {
      data.x(i, c + 1) = parse_double(rows[i][h.covariate_idx[c]], file_row,
                                      h.covariate_names[c]);
    }
    for (std::size_t k = 0; k < h.exp_idx.size(); ++k) {
      data.z.at(i, h.exp_pollutant[k], h.exp_period[k]) = parse_double(
          rows[i][h.exp_idx[k]], file_row, header[h.exp_idx[k]]);
    }
  }
  if (standardize) {
    data.scaling = iqr_standardize(data.z, data.pollutant_names);
  }
  return data;
}

}  // namespace

ExposureDataset ingest_csv(const std::string& path, bool standardize) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  return ingest_stream(in, path, standardize, /*require_y=*/true);
}

void write_dataset_csv(const ExposureDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write '" + path + "'");
  out << "y";
  for (std::size_t c = 1; c < data.covariate_names.size(); ++c) {
    out << "," << data.covariate_names[c];
  }
  for (std::size_t j = 0; j < data.q(); ++j) {
    for (std::size_t t = 0; t < data.m(); ++t) {
      out << ",z_" << data.pollutant_names[j] << "_" << (t + 1);
    }
  }
  out << "\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << data.y[i];
    for (std::size_t c = 1; c < data.x.cols(); ++c) {
      out << "," << format_g17(data.x(i, c));
    }
    for (std::size_t j = 0; j < data.q(); ++j) {
      for (std::size_t t = 0; t < data.m(); ++t) {
        out << "," << format_g17(data.z.at(i, j, t));
      }
    }
    out << "\n";
  }
  if (!out) throw input_error("write failed for '" + path + "'");
}

ExposureTensor load_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  ExposureDataset d = ingest_stream(in, path, false, /*require_y=*/false);
  return std::move(d.z);
}

}  // namespace cwvsmix
