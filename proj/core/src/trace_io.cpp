#include "aamr/trace_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "aamr/error.hpp"

namespace aamr {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw InvalidInput("trace csv row " + std::to_string(row) + ": bad number '" +
                       cell + "'");
  }
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericalFailure("format_real: conversion failed");
  return std::string(buf, ptr);
}

void write_trace_csv(std::ostream& out, std::span<const IterationRecord> trace) {
  Index shadow_dim = 0;
  if (!trace.empty() && trace.front().shadow) shadow_dim = trace.front().shadow->size();

  std::string text = "n,fp_residual,r_residual,scaled_residual,km_gap";
  for (Index i = 0; i < shadow_dim; ++i) text += ",y" + std::to_string(i);
  text += '\n';
  for (const auto& rec : trace) {
    text += std::to_string(rec.n);
    text += ',' + format_real(rec.fp_residual);
    text += ',' + format_real(rec.r_residual);
    text += ',' + format_real(rec.scaled_residual);
    text += ',';
    if (rec.km_gap) text += format_real(*rec.km_gap);
    if (rec.shadow) {
      for (Index i = 0; i < rec.shadow->size(); ++i) text += ',' + format_real((*rec.shadow)[i]);
    }
    text += '\n';
  }
  out << text;
}

std::vector<IterationRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("trace csv: missing header");
  const auto header = split_csv(line);
  if (header.size() < 5 || header[0] != "n" || header[4] != "km_gap") {
    throw InvalidInput("trace csv: unexpected header '" + line + "'");
  }
  const std::size_t shadow_dim = header.size() - 5;

  std::vector<IterationRecord> trace;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw InvalidInput("trace csv row " + std::to_string(row) + ": expected " +
                         std::to_string(header.size()) + " cells");
    }
    IterationRecord rec;
    rec.n = static_cast<std::int64_t>(parse_cell(cells[0], row));
    rec.fp_residual = parse_cell(cells[1], row);
    rec.r_residual = parse_cell(cells[2], row);
    rec.scaled_residual = parse_cell(cells[3], row);
    if (!cells[4].empty()) rec.km_gap = parse_cell(cells[4], row);
    if (shadow_dim > 0) {
      Vector y(static_cast<Index>(shadow_dim));
      for (std::size_t i = 0; i < shadow_dim; ++i) {
        y[static_cast<Index>(i)] = parse_cell(cells[5 + i], row);
      }
      rec.shadow = std::move(y);
    }
    trace.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace aamr
