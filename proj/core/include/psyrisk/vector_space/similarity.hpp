#pragma once

#include "psyrisk/vector_space/svd.hpp"

namespace psyrisk {

/// u.v / (|u| |v|), clamped to [-1, 1]. Throws NumericalError if either
/// vector has zero norm and DataError on a dimension mismatch.
double cosine(const DocVector& u, const DocVector& v);

}  // namespace psyrisk
