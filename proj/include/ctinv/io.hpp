#pragma once

// CSV files with one leading "# {json}" metadata line. Numbers are written
// with 12 significant digits in scientific notation ("%.11e"); an empty field
// is an absent optional value.
//
//   phase shifts:  l,re_delta,im_delta,eta
//   potential:     x,re_q,im_q[,r,re_V,im_V],flag
//   spin pairs:    l,re_delta_plus,im_delta_plus,re_delta_minus,im_delta_minus
//
// Angles are radians unless the reader is asked to convert from degrees.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctinv/potential.hpp"
#include "ctinv/types.hpp"

namespace ctinv::io {

struct Metadata {
  std::optional<double> energy_mev;
  std::optional<double> k_per_fm;
  std::string label;
  std::string generator;

  bool operator==(const Metadata&) const = default;
};

/// At most one of im_delta and eta is present.
struct PhaseShiftRecord {
  int l = 0;
  double re_delta = 0.0;
  std::optional<double> im_delta;
  std::optional<double> eta;

  /// re_delta - (i/2) ln eta when eta is given.
  cplx delta() const;

  bool operator==(const PhaseShiftRecord&) const = default;
};

struct PhaseShiftFile {
  Metadata meta;
  std::vector<PhaseShiftRecord> records;

  PhaseShiftSet to_set() const;
  static PhaseShiftFile from_set(const PhaseShiftSet& set, Metadata meta = {});

  bool operator==(const PhaseShiftFile&) const = default;
};

struct PotentialRow {
  double x = 0.0;
  cplx q;
  PointFlag flag = PointFlag::Clean;

  bool operator==(const PotentialRow&) const = default;
};

/// Physical columns are written when both energy and k are in the metadata.
struct PotentialFile {
  Metadata meta;
  std::vector<PotentialRow> rows;

  /// Rows at x <= 0 (extrapolated origin values) are skipped.
  PotentialCurve to_curve() const;
  static PotentialFile from_curve(const PotentialCurve& curve, Metadata meta = {});

  bool operator==(const PotentialFile&) const = default;
};

struct SpinPairRecord {
  int l = 0;
  cplx delta_plus;
  /// Absent only for l = 0.
  std::optional<cplx> delta_minus;
};

struct SpinPairFile {
  Metadata meta;
  std::vector<SpinPairRecord> records;
};

std::string format_number(double v);

void write_phase_shifts(std::ostream& os, const PhaseShiftFile& file);
PhaseShiftFile read_phase_shifts(std::istream& is, bool degrees = false);

void write_potential(std::ostream& os, const PotentialFile& file);
PotentialFile read_potential(std::istream& is);

SpinPairFile read_spin_pairs(std::istream& is, bool degrees = false);

PhaseShiftFile load_phase_shifts(const std::string& path, bool degrees = false);
PotentialFile load_potential(const std::string& path);
SpinPairFile load_spin_pairs(const std::string& path, bool degrees = false);
void save(const std::string& path, const PhaseShiftFile& file);
void save(const std::string& path, const PotentialFile& file);

}  // namespace ctinv::io
