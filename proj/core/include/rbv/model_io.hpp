#ifndef RBV_MODEL_IO_HPP
#define RBV_MODEL_IO_HPP

#include <stdexcept>
#include <string>

#include "rbv/hgb.hpp"
#include "rbv/lognnet.hpp"
#include "rbv/quantize.hpp"

namespace rbv {

/// Thrown for malformed model files; message carries the line number.
struct ModelParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// LOGNNET1: the quantized edge model, line-oriented decimal integers.
void export_lognnet(const QuantizedModel& q, const std::string& path);
QuantizedModel import_lognnet(const std::string& path);

// LOGNNETF1: float-precision model, the artifact between training and
// quantization. Values printed with round-trip precision.
void export_lognnet_float(const LogNNetModel& m, const std::string& path);
LogNNetModel import_lognnet_float(const std::string& path);

// HGB1: params line, per-feature bin thresholds, per-tree preorder node list.
void export_hgb(const HgbModel& m, const std::string& path);
HgbModel import_hgb(const std::string& path);

/// First line of the file, used to dispatch on model kind.
std::string sniff_model_magic(const std::string& path);

}  // namespace rbv

#endif
