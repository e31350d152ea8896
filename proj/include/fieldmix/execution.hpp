#pragma once

namespace fieldmix {

/// Selects between the OpenMP kernel and the serial reference path.
/// Both paths produce bit-identical results.
enum class Exec { serial, parallel };

}  // namespace fieldmix
