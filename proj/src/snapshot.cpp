#include "splf/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "splf/errors.hpp"

namespace splf {

namespace {

template <class T>
void put(std::ostream& out, T value) {
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes{};
  if (!in.read(bytes.data(), sizeof(T))) throw Error("snapshot: truncated input");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

void write_snapshot(std::ostream& out, const SpectralField& field) {
  out.write("SPLF", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.order()));
  const auto& modes = field.modes();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(modes.size()));
  for (std::size_t k = 0; k < modes.size(); ++k) {
    for (int c : modes[k].components()) put<std::int32_t>(out, c);
    for (int i = 0; i < field.dim(); ++i) {
      put<double>(out, field.at(k, i).real());
      put<double>(out, field.at(k, i).imag());
    }
  }
  if (!out) throw Error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& file, const SpectralField& field) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("snapshot: cannot open " + file.string());
  write_snapshot(out, field);
}

SpectralField read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SPLF", 4) != 0) throw Error("snapshot: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw Error("snapshot: unsupported version " + std::to_string(version));
  const auto d = static_cast<int>(get<std::uint32_t>(in));
  const auto n = static_cast<int>(get<std::uint32_t>(in));
  const auto count = get<std::uint32_t>(in);
  RawModes raw(d, n);
  if (count != raw.modes().size()) throw Error("snapshot: mode count does not match (d, n)");
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<int> z(static_cast<std::size_t>(d));
    for (auto& c : z) c = get<std::int32_t>(in);
    if (WaveVector(z) != raw.modes()[k]) throw Error("snapshot: modes out of canonical order");
    for (int i = 0; i < d; ++i) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      raw.at(k, i) = cplx(re, im);
    }
  }
  return SpectralField::from_raw_checked(std::move(raw));
}

SpectralField read_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("snapshot: cannot open " + file.string());
  return read_snapshot(in);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec) {
  out << "t,normL2sq,normVp1_p,int_diss,int_gammaXX";
  for (std::size_t k = 0; k < rec.dim; ++k) out << ",x" << k;
  out << '\n';
  char buf[32];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t r = 0; r < rec.size(); ++r) {
    num(rec.times[r]);
    for (double v : {rec.norm_l2_sq[r], rec.norm_vp1_p[r], rec.int_diss[r], rec.int_gamma_xx[r]}) {
      out << ',';
      num(v);
    }
    for (double v : rec.state(r)) {
      out << ',';
      num(v);
    }
    out << '\n';
  }
}

}  // namespace splf
