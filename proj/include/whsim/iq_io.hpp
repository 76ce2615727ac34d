#pragma once

#include "whsim/channel.hpp"
#include "whsim/linalg.hpp"

#include <string>

namespace whsim {

/// IQ recording format: text CSV with header
///   t,ch0_re,ch0_im,ch1_re,ch1_im,...
/// one row per symbol slot, signal channels first, floats printed with 17
/// significant digits so a write/read round trip is bit-exact.
void write_iq_csv(const ObservationBlock& block, const std::string& path);

/// Raw N x T recording read back from the IQ CSV format. Malformed headers,
/// rows of the wrong arity, non-numeric fields, and empty data sections all
/// throw MalformedInput.
ComplexMatrix read_iq_csv(const std::string& path);

/// Split a raw recording into signal and noise rows.
ObservationBlock partition_recording(const ComplexMatrix& raw, std::size_t n_s, std::size_t n_n);

} // namespace whsim
