#pragma once

#include <string>

namespace mqcic {

/// Three-valued truth. Unknown is a first-class outcome ("Not sure"), not an
/// error: a fact that cannot be verified from the note evaluates to Unknown.
enum class TruthValue { True, False, Unknown };

inline const char* to_string(TruthValue v) {
    switch (v) {
        case TruthValue::True: return "True";
        case TruthValue::False: return "False";
        default: return "Unknown";
    }
}

/// Lift a definite boolean into the three-valued domain.
inline TruthValue truth_of(bool b) { return b ? TruthValue::True : TruthValue::False; }

inline bool is_definite(TruthValue v) { return v != TruthValue::Unknown; }

}  // namespace mqcic
