#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

#include "pwinterp/criterion.hpp"
#include "pwinterp/kernels.hpp"
#include "pwinterp/reconstruct.hpp"
#include "pwinterp/signals.hpp"

namespace pwinterp {

// Structural problems in an input file (bad JSON, missing/extra fields,
// inconsistent N, wrong value types).
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An operator entry whose "type" is not recognized, or that carries keys
// not belonging to its type.
class UnknownOperatorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Family file:
// {
//   "N": int,
//   "rho": real (optional, default N),
//   "delta": real (optional, default 1),
//   "operators": [
//     {"type": "identity"} |
//     {"type": "shift", "a": real} |
//     {"type": "derivative", "order": int, "shift": real} |
//     {"type": "diffquot", "epsilon": real, "shift": real} |
//     {"type": "poly", "coeffs": [[re, im], ...], "shift": real} |
//     {"type": "power", "base": <operator>, "k": int}
//   ]
// }
// Unknown keys are rejected.
OperatorFamily parse_family_json(const std::string& text);
OperatorFamily load_family(const std::string& path);

// Signal file: {"terms": [{"c": [re, im], "x0": real}, ...]}
BandlimitedSignal parse_signal_json(const std::string& text);
BandlimitedSignal load_signal(const std::string& path);

std::string family_to_json(const OperatorFamily& family);

const char* criterion_case_name(CriterionCase c);
const char* verdict_name(Verdict v);
int criterion_case_exit_code(CriterionCase c);

std::string criterion_report_json(const CriterionReport& report);
std::string sampling_verdict_json(const SamplingVerdict& verdict);
std::string frame_report_json(const FrameReport& report);

void write_det_profile_csv(std::ostream& os, const MatrixField& field);
void write_spectra_csv(std::ostream& os, const SpectralKernelSet& kset);
void write_kernel_values_csv(std::ostream& os, const KernelSet& kernels,
                             std::span<const double> xs);
void write_samples_csv(std::ostream& os, const SampleSet& samples);
void write_reconstruction_csv(std::ostream& os, const BandlimitedSignal& f,
                              const SampleSet& samples,
                              const KernelSet& kernels,
                              std::span<const double> xs);

}  // namespace pwinterp
