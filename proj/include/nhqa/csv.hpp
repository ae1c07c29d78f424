#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>

#include "nhqa/errors.hpp"
#include "nhqa/propagate.hpp"

namespace nhqa {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw numeric_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

inline constexpr const char* kTrajectoryCsvHeader =
    "s,t,re_c0,im_c0,re_c1,im_c1,p_tau,p_surv,re_e0,im_e0,re_e1,im_e1,gap";

inline constexpr const char* kTrajectoryCsvHeaderNoSpectra =
    "s,t,re_c0,im_c0,re_c1,im_c1,p_tau,p_surv";

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr,
                                 bool with_spectra = true) {
  os << (with_spectra ? kTrajectoryCsvHeader : kTrajectoryCsvHeaderNoSpectra) << '\n';
  const double tau = tr.params.tau;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    os << format_double(tr.times[i] / tau) << ',' << format_double(tr.times[i]) << ','
       << format_double(tr.c0[i].real()) << ',' << format_double(tr.c0[i].imag()) << ','
       << format_double(tr.c1[i].real()) << ',' << format_double(tr.c1[i].imag()) << ','
       << format_double(tr.transition_prob[i]) << ',' << format_double(tr.survival_prob[i]);
    if (with_spectra) {
      const Spectrum& sp = tr.spectra[i];
      os << ',' << format_double(sp.e0.real()) << ',' << format_double(sp.e0.imag()) << ','
         << format_double(sp.e1.real()) << ',' << format_double(sp.e1.imag()) << ','
         << format_double(sp.gap_magnitude);
    }
    os << '\n';
  }
}

}  // namespace nhqa
