// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "hillband/coeffs.hpp"

namespace hillband {

/// Parses the line-oriented model definition grammar:
///   key = value          one per line, '#' starts a comment
///   model = free_particle | constant_shift | kronig_penney | mathieu
///           | piecewise_constant
///   period = <number>
///   model parameters: v0 | barrier_height, barrier_width | amplitude
///   segment = width,p,q,s   (repeated; piecewise_constant only)
/// Throws ValidationError naming the offending key on malformed input.
PeriodicCoefficients parse_model_config(const std::string& text);

/// Reads and parses a model file.
PeriodicCoefficients load_model_file(const std::string& path);

/// Canonical one-line rendering of a model (17 significant digits); equal
/// models produce identical strings.
std::string canonical_model_string(const PeriodicCoefficients& coeffs);

/// FNV-1a hash of the canonical string, as 16 hex digits. Used as the
/// provenance key in emitted artifacts.
std::string model_hash(const PeriodicCoefficients& coeffs);

}  // namespace hillband
