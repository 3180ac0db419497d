#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "decaykit/errors.hpp"
#include "decaykit/evolution.hpp"

namespace decaykit {

// 17 significant digits: round-trip exact for IEEE doubles.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Atomic file write: temporary in the same directory, then rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("write_atomic: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write_atomic: short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Series CSV with fixed column set; decomposition columns stay empty when the
// method does not produce them.
inline std::string series_to_csv(const AmplitudeSeries& s) {
  std::string csv = "t,re_A,im_A,P,re_pole,im_pole,re_cut,im_cut\n";
  for (std::size_t i = 0; i < s.grid.nodes.size(); ++i) {
    csv += fmt17(s.grid.nodes[i]);
    csv += ',';
    csv += fmt17(s.amplitude[i].real());
    csv += ',';
    csv += fmt17(s.amplitude[i].imag());
    csv += ',';
    csv += fmt17(s.probability[i]);
    csv += ',';
    if (s.pole_part) {
      csv += fmt17((*s.pole_part)[i].real());
      csv += ',';
      csv += fmt17((*s.pole_part)[i].imag());
      csv += ',';
    } else {
      csv += ",,";
    }
    if (s.cut_part) {
      csv += fmt17((*s.cut_part)[i].real());
      csv += ',';
      csv += fmt17((*s.cut_part)[i].imag());
    } else {
      csv += ',';
    }
    csv += '\n';
  }
  return csv;
}

// FNV-1a 64-bit hash, used to fingerprint configurations in run manifests.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace decaykit
