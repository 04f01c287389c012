#include "psyrisk/vector_space/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "psyrisk/errors.hpp"

namespace psyrisk {

double cosine(const DocVector& u, const DocVector& v)
{
    if (u.size() != v.size()) {
        throw DataError("cosine of vectors with different dimensions");
    }
    // The product of norms is symmetric in (u, v), so cosine(u, v) ==
    // cosine(v, u) holds bit for bit.
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) {
        throw NumericalError("cosine similarity of a zero vector is undefined");
    }
    const double c = u.dot(v) / (nu * nv);
    return std::clamp(c, -1.0, 1.0);
}

}  // namespace psyrisk
