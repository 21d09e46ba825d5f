#include "cdg/column.hpp"

#include <cmath>

namespace cdg {

void ColumnGrid::restack() {
    for (int k = 0; k < ncells; ++k) {
        for (int l = nlayers - 1; l >= 0; --l) {
            if (!(thickness(k, l) > 0.0))
                throw StateError("non-positive layer thickness after update");
            iface(k, l) = iface(k, l + 1) + thickness(k, l);
        }
    }
}

void ColumnGrid::check() const {
    for (int k = 0; k < ncells; ++k)
        for (int l = 0; l < nlayers; ++l) {
            if (!(thickness(k, l) > 0.0) || !std::isfinite(thickness(k, l)))
                throw StateError("non-positive layer thickness");
            if (!(iface(k, l) > iface(k, l + 1))) throw StateError("inverted layer interfaces");
        }
}

ColumnGrid init_uniform_columns(int ncells, int nlayers, double depth,
                                const std::vector<double>& ssh) {
    if (ncells <= 0 || nlayers <= 0) throw ConfigError("columns need positive cell/layer counts");
    if (!(depth > 0.0)) throw ConfigError("column depth must be positive");
    if (!ssh.empty() && int(ssh.size()) != ncells)
        throw ConfigError("ssh vector size does not match cell count");

    ColumnGrid g(ncells, nlayers);
    for (int k = 0; k < ncells; ++k) {
        const double top = ssh.empty() ? 0.0 : ssh[k];
        const double hl = (depth + top) / nlayers;
        for (int l = 0; l < nlayers; ++l) g.thickness(k, l) = hl;
        g.iface(k, nlayers) = -depth;
    }
    g.restack();
    g.check();
    return g;
}

} // namespace cdg
