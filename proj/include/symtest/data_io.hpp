#ifndef SYMTEST_DATA_IO_HPP
#define SYMTEST_DATA_IO_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "symtest/errors.hpp"
#include "symtest/montecarlo.hpp"
#include "symtest/sample.hpp"

namespace symtest {

// ---------------------------------------------------------------------------
// Embedded datasets

enum class DatasetId { ds1 = 1, ds2, ds3, ds4, ds5, ds6 };

struct NamedDataset {
  std::string id;
  std::string description;
  std::string citation;
  std::vector<double> raw;  // as listed, original order
  Sample values;
  int default_m;
};

namespace detail {

struct EmbeddedRecord {
  const char* id;
  const char* description;
  const char* citation;
  int default_m;
  const char* values;
};

// Values exactly as published, comma separated, original order.
inline constexpr std::array<EmbeddedRecord, 6> kEmbedded = {{
    {"ds1", "industrial measurements; normal model", "Montgomery et al. (2021)", 2,
     "15.5, 23.75, 8.0, 17.0, 5.5, 19.0, 24.0, 2.5, 7.5, 11.0, 13.0, 3.75, 25.0, 9.75, 22.0, 18.0, 6.0, "
     "12.5, 2.0, 21.5"},
    {"ds2", "active repair times (hours), airborne communication transceiver", "Qiu and Jia (2018b)", 20,
     "0.2, 0.3, 0.5, 0.5, 0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.7, 0.8, 0.8, 1.0, 1.0, 1.0, 1.0, 1.1, 1.3, 1.5, "
     "1.5, 1.5, 1.5, 2.0, 2.0, 2.2, 2.5, 3.0, 3.0, 3.3, 3.3, 4.0, 4.0, 4.5, 4.7, 5.0, 5.4, 5.4, 7.0, 7.5, "
     "8.8, 9.0, 10.3, 22.0, 24.5"},
    {"ds3", "normal-model example", "Sathar and Jose (2020)", 3,
     "1.42, 0.84, 2.32, 1.84, 2.4, 0.9, 1.49, 0.87, 1.36, 1.25, 1.25, 1.8, 0.86, 0.04, 0.49, 2.08, 0.58, "
     "0.22, 0.06, 1.7, 2.67, 2.39, 2.32, 2.98, 3.21, 1.99, 1.3, 1.25, 1.76, 1.67, 1.36, 1.57, 1.21, 1.24, "
     "1.62, 0.93, 1.32, 0.86, 1.48, 0.85, 1.23, 1.23, 2.14"},
    {"ds4", "Burr XII (skewed) model example", "Thomas and Jose (2021)", 25,
     "99, 61, 86, 113, 96, 99, 83, 57, 80, 79, 75, 70, 15, 62, 87, 95, 81, 71, 44, 13, 52, 97, 146, 52, 52, "
     "29, 108, 135, 102, 48, 66, 90, 22, 72, 176, 107, 84, 83, 37, 67, 83, 36, 49, 39, 102, 66, 154, 72, "
     "63, 83, 77"},
    {"ds5", "vinyl chloride data after probability integral transform", "Xiong et al. (2022)", 11,
     "0.0518, 0.0518, 0.1009, 0.1009, 0.1917, 0.1917, 0.1917, 0.2336, 0.2336, 0.2336, 0.2733, 0.2733, "
     "0.3467, 0.3805, 0.3805, 0.4126, 0.4431, 0.4719, 0.4719, 0.4993, 0.6162, 0.6550, 0.6550, 0.7059, "
     "0.7211, 0.7356, 0.7623, 0.7863, 0.8178, 0.8810, 0.9337, 0.9404, 0.9732, 0.9858"},
    {"ds6", "cycles to failure (1000s) of electrical appliances", "Lawless (2011)", 2,
     "0.014, 0.034, 0.059, 0.061, 0.069, 0.080, 0.123, 0.142, 0.165, 0.210, 0.381, 0.464, 0.479, 0.556, "
     "0.574, 0.839, 0.917, 0.969, 0.991, 1.064, 1.088, 1.091, 1.174, 1.270, 1.275, 1.355, 1.397, 1.477, "
     "1.578, 1.649, 1.702, 1.893, 1.932, 2.001, 2.161, 2.292, 2.326, 2.337, 2.628, 2.785, 2.811, 2.886, "
     "2.993, 3.122, 3.248, 3.715, 3.790, 3.857, 3.912, 4.100"},
}};

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view token) {
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    out.push_back(parse_double(token).value());
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

/// FNV-1a 64 over the canonical (shortest round-trip) decimal form of each
/// value joined by ','. Guards the embedded constants against drift.
inline std::uint64_t value_digest(std::span<const double> values) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  };
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) feed(',');
    const auto res = std::to_chars(buf, buf + sizeof buf, values[i]);
    for (const char* p = buf; p != res.ptr; ++p) feed(*p);
  }
  return h;
}

inline NamedDataset load_embedded(DatasetId id) {
  const auto& rec = detail::kEmbedded[static_cast<std::size_t>(id) - 1];
  std::vector<double> raw = detail::parse_list(rec.values);
  Sample s(raw);
  return {rec.id, rec.description, rec.citation, std::move(raw), std::move(s), rec.default_m};
}

inline std::optional<DatasetId> parse_dataset_id(std::string_view name) {
  for (std::size_t i = 0; i < detail::kEmbedded.size(); ++i) {
    if (name == detail::kEmbedded[i].id) return static_cast<DatasetId>(i + 1);
  }
  return std::nullopt;
}

inline constexpr std::array<DatasetId, 6> kAllDatasets = {DatasetId::ds1, DatasetId::ds2, DatasetId::ds3,
                                                           DatasetId::ds4, DatasetId::ds5, DatasetId::ds6};

// ---------------------------------------------------------------------------
// User data files

enum class InputFormat { automatic, whitespace, csv };

inline constexpr std::size_t kMinFileObservations = 5;

/// Reads reals from a whitespace/newline-delimited file or a single-column
/// CSV. Blank lines and '#' comments are skipped. `automatic` picks CSV for a
/// .csv extension.
inline NamedDataset load_file(const std::filesystem::path& path, InputFormat format = InputFormat::automatic) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  if (format == InputFormat::automatic) {
    format = path.extension() == ".csv" ? InputFormat::csv : InputFormat::whitespace;
  }
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw data_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  auto take = [&](std::string_view token) {
    const auto v = detail::parse_double(token);
    if (!v) fail("cannot parse '" + std::string(token) + "' as a number");
    if (!std::isfinite(*v)) fail("non-finite value '" + std::string(token) + "'");
    values.push_back(*v);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = detail::trim(body);
    if (body.empty()) continue;
    if (format == InputFormat::csv) {
      const auto comma = body.find(',');
      if (comma != std::string_view::npos && !detail::trim(body.substr(comma + 1)).empty()) {
        fail("expected a single column");
      }
      take(detail::trim(body.substr(0, comma)));
    } else {
      std::size_t pos = 0;
      while (pos < body.size()) {
        const auto b = body.find_first_not_of(" \t\r", pos);
        if (b == std::string_view::npos) break;
        const auto e = body.find_first_of(" \t\r", b);
        take(body.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
        pos = e == std::string_view::npos ? body.size() : e;
      }
    }
  }
  if (values.size() < kMinFileObservations) {
    throw data_error(path.string() + ": need at least " + std::to_string(kMinFileObservations) +
                     " observations, found " + std::to_string(values.size()));
  }
  Sample s(values);
  return {path.string(), "user data", path.string(), std::move(values), std::move(s), 0};
}

// ---------------------------------------------------------------------------
// Writers

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write " + path.string());
  return out;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw data_error("write failed for " + path.string());
}

inline void write_provenance(std::ostream& out, const Provenance& provenance) {
  for (const auto& [key, value] : provenance) out << "# " << key << ": " << value << '\n';
}

}  // namespace detail

/// One value per line, shortest round-trip form.
inline void write_sample(std::span<const double> values, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  for (double v : values) out << format_number(v) << '\n';
  detail::finish_write(out, path);
}

/// CSV with `m\N,<N...>` header; empty cells stay empty strings.
inline void write_table_stream(std::ostream& out, const TableGrid& grid, const Provenance& provenance) {
  detail::write_provenance(out, provenance);
  out << "m\\N";
  for (std::size_t n : grid.n_values) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < grid.m_values.size(); ++r) {
    out << grid.m_values[r];
    for (std::size_t c = 0; c < grid.n_values.size(); ++c) {
      out << ',';
      if (const auto& v = grid.cell(r, c)) out << format_number(*v);
    }
    out << '\n';
  }
}

inline void write_table(const TableGrid& grid, const Provenance& provenance, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  write_table_stream(out, grid, provenance);
  detail::finish_write(out, path);
}

struct LoadedTable {
  TableGrid grid;
  Provenance provenance;
};

inline LoadedTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  LoadedTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::vector<std::optional<double>>> rows;
  auto fail = [&](const std::string& what) {
    throw data_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  auto split = [](std::string_view s) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    for (;;) {
      const auto comma = s.find(',', pos);
      fields.push_back(detail::trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return fields;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      body = detail::trim(body.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string_view::npos) {
        t.provenance.emplace_back(std::string(detail::trim(body.substr(0, colon))),
                                  std::string(detail::trim(body.substr(colon + 1))));
      }
      continue;
    }
    const auto fields = split(body);
    if (!have_header) {
      if (fields.front() != "m\\N") fail("expected header starting with m\\N");
      for (std::size_t i = 1; i < fields.size(); ++i) {
        const auto v = detail::parse_double(fields[i]);
        if (!v) fail("bad N in header");
        t.grid.n_values.push_back(static_cast<std::size_t>(*v));
      }
      have_header = true;
      continue;
    }
    if (fields.size() != t.grid.n_values.size() + 1) fail("wrong number of fields");
    const auto m = detail::parse_double(fields.front());
    if (!m) fail("bad window size");
    t.grid.m_values.push_back(static_cast<int>(*m));
    std::vector<std::optional<double>> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].empty()) {
        row.emplace_back();
      } else {
        const auto v = detail::parse_double(fields[i]);
        if (!v) fail("bad cell '" + std::string(fields[i]) + "'");
        row.emplace_back(*v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw data_error(path.string() + ": no table header");
  for (auto& row : rows) {
    for (auto& cell : row) t.grid.cells.push_back(cell);
  }
  return t;
}

/// Two-column `x,density` CSV.
inline void write_density(const DensityCurve& curve, const Provenance& provenance, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  detail::write_provenance(out, provenance);
  out << "x,density\n";
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    out << format_number(curve.x[i]) << ',' << format_number(curve.density[i]) << '\n';
  }
  detail::finish_write(out, path);
}

inline DensityCurve read_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  DensityCurve curve;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#' || body == "x,density") continue;
    const auto comma = body.find(',');
    const auto x = comma == std::string_view::npos ? std::nullopt : detail::parse_double(body.substr(0, comma));
    const auto d = comma == std::string_view::npos ? std::nullopt : detail::parse_double(body.substr(comma + 1));
    if (!x || !d) throw data_error(path.string() + ":" + std::to_string(line_no) + ": bad density row");
    curve.x.push_back(*x);
    curve.density.push_back(*d);
  }
  return curve;
}

}  // namespace symtest

#endif  // SYMTEST_DATA_IO_HPP
