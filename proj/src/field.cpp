#include "meanfield/field.hpp"

#include <algorithm>
#include <cmath>

namespace mfl {

namespace {

// Clamp-or-wrap a node index according to the boundary rule.
int fold(int i, int n, ChemicalField::Bc bc) {
    if (bc == ChemicalField::Bc::Periodic) {
        i %= n;
        if (i < 0) i += n;
        return i;
    }
    return std::clamp(i, 0, n - 1); // Neumann mirror (first order)
}

} // namespace

ChemicalField ChemicalField::make(const Box& box, std::array<int, 2> nodes, Bc bc,
                                  double initial) {
    if (box.dim > 2) throw ValidationError("chemical field: gridded dims are 1 or 2");
    ChemicalField f;
    f.dim = box.dim;
    f.box = box;
    f.bc = bc;
    f.nodes = nodes;
    if (f.dim == 1) f.nodes[1] = 1;
    if (f.nodes[0] < 2 || (f.dim == 2 && f.nodes[1] < 2))
        throw ValidationError("chemical field: need at least 2 nodes per dimension");
    f.phi.assign(std::size_t(f.nodes[0]) * f.nodes[1], initial);
    return f;
}

void ChemicalField::validate() const {
    for (double v : phi)
        if (!std::isfinite(v)) throw NumericalError("chemical field: non-finite value");
}

namespace {

struct InterpWeights {
    int i0, i1;
    double w0, w1;
};

InterpWeights axis_weights(const ChemicalField& f, double x, int c) {
    const double dx = f.dx(c);
    const double s = (x - f.box.lo[c]) / dx - 0.5; // node-index coordinate
    const double fl = std::floor(s);
    int i0 = int(fl);
    const double t = s - fl;
    InterpWeights w;
    w.i0 = fold(i0, f.nodes[c], f.bc);
    w.i1 = fold(i0 + 1, f.nodes[c], f.bc);
    w.w0 = 1.0 - t;
    w.w1 = t;
    return w;
}

void check_inside(const ChemicalField& f, const Vec& x) {
    if (f.bc == ChemicalField::Bc::Periodic) return;
    for (int c = 0; c < f.dim; ++c)
        if (x[c] < f.box.lo[c] || x[c] > f.box.hi[c])
            throw ValidationError("chem field: position outside non-periodic box");
}

// Central-difference gradient at node (i, j), component c.
double nodal_gradient(const ChemicalField& f, int i, int j, int c) {
    const int n = f.nodes[c];
    const auto bc = f.bc;
    int ip, im;
    if (c == 0) { ip = fold(i + 1, n, bc); im = fold(i - 1, n, bc); }
    else        { ip = fold(j + 1, n, bc); im = fold(j - 1, n, bc); }
    const double hi = (c == 0) ? f.at(ip, j) : f.at(i, ip);
    const double lo = (c == 0) ? f.at(im, j) : f.at(i, im);
    double span = 2.0 * f.dx(c);
    if (bc == ChemicalField::Bc::Neumann) {
        // one-sided at walls where the mirror collapses the stencil
        const int idx = (c == 0) ? i : j;
        if (idx == 0 || idx == n - 1) span = f.dx(c);
    }
    return (hi - lo) / span;
}

} // namespace

double chem_value(const ChemicalField& f, const Vec& xin) {
    Vec x = f.box.boundary == Boundary::Periodic ? f.box.wrap(xin) : xin;
    check_inside(f, x);
    const InterpWeights wx = axis_weights(f, x[0], 0);
    if (f.dim == 1) return wx.w0 * f.at(wx.i0, 0) + wx.w1 * f.at(wx.i1, 0);
    const InterpWeights wy = axis_weights(f, x[1], 1);
    return wx.w0 * (wy.w0 * f.at(wx.i0, wy.i0) + wy.w1 * f.at(wx.i0, wy.i1)) +
           wx.w1 * (wy.w0 * f.at(wx.i1, wy.i0) + wy.w1 * f.at(wx.i1, wy.i1));
}

Vec chem_gradient(const ChemicalField& f, const Vec& xin) {
    Vec x = f.box.boundary == Boundary::Periodic ? f.box.wrap(xin) : xin;
    check_inside(f, x);
    Vec g = vzero();
    const InterpWeights wx = axis_weights(f, x[0], 0);
    if (f.dim == 1) {
        for (int c = 0; c < 1; ++c)
            g[c] = wx.w0 * nodal_gradient(f, wx.i0, 0, c) +
                   wx.w1 * nodal_gradient(f, wx.i1, 0, c);
        return g;
    }
    const InterpWeights wy = axis_weights(f, x[1], 1);
    for (int c = 0; c < 2; ++c) {
        g[c] = wx.w0 * (wy.w0 * nodal_gradient(f, wx.i0, wy.i0, c) +
                        wy.w1 * nodal_gradient(f, wx.i0, wy.i1, c)) +
               wx.w1 * (wy.w0 * nodal_gradient(f, wx.i1, wy.i0, c) +
                        wy.w1 * nodal_gradient(f, wx.i1, wy.i1, c));
    }
    return g;
}

std::vector<double> deposit_sources(const ChemicalField& f,
                                    const std::vector<Vec>& positions,
                                    const Bump& chi) {
    std::vector<double> src(f.size(), 0.0);
    if (positions.empty()) return src;
    const double wpart = 1.0 / double(positions.size());
    // chi has compact support; only touch nearby nodes.
    const int rx = int(std::ceil(chi.radius / f.dx(0))) + 1;
    const int ry = (f.dim == 2) ? int(std::ceil(chi.radius / f.dx(1))) + 1 : 0;
    for (const Vec& p : positions) {
        const double sx = (p[0] - f.box.lo[0]) / f.dx(0) - 0.5;
        const int ci = int(std::floor(sx + 0.5));
        for (int di = -rx; di <= rx; ++di) {
            const int i = fold(ci + di, f.nodes[0], f.bc);
            if (f.dim == 1) {
                Vec node{f.node_coord(i, 0), 0.0, 0.0};
                const double r = std::abs(f.box.delta(node[0], p[0], 0));
                src[i * f.nodes[1]] += wpart * chi.value(r);
            } else {
                const double sy = (p[1] - f.box.lo[1]) / f.dx(1) - 0.5;
                const int cj = int(std::floor(sy + 0.5));
                for (int dj = -ry; dj <= ry; ++dj) {
                    const int j = fold(cj + dj, f.nodes[1], f.bc);
                    const double ddx = f.box.delta(f.node_coord(i, 0), p[0], 0);
                    const double ddy = f.box.delta(f.node_coord(j, 1), p[1], 1);
                    const double r = std::hypot(ddx, ddy);
                    src[i * f.nodes[1] + j] += wpart * chi.value(r);
                }
            }
        }
    }
    return src;
}

void step_chemical_gridded(ChemicalField& f, const std::vector<double>& source,
                           double D, double kappa, double dt) {
    if (source.size() != f.phi.size())
        throw ValidationError("chemical step: source size mismatch");
    double inv2sum = 0.0;
    for (int c = 0; c < f.dim; ++c) inv2sum += 1.0 / (f.dx(c) * f.dx(c));
    if (D > 0.0 && D * dt * inv2sum > 0.5 + 1e-12)
        throw CflError("chemical step: diffusion CFL violated (D dt sum(1/dx^2) > 1/2)");

    const int nx = f.nodes[0], ny = f.nodes[1];
    std::vector<double> next(f.phi.size());
    for (int i = 0; i < nx; ++i) {
        const int ip = fold(i + 1, nx, f.bc), im = fold(i - 1, nx, f.bc);
        for (int j = 0; j < ny; ++j) {
            double lap = (f.at(ip, j) - 2.0 * f.at(i, j) + f.at(im, j)) /
                         (f.dx(0) * f.dx(0));
            if (f.dim == 2) {
                const int jp = fold(j + 1, ny, f.bc), jm = fold(j - 1, ny, f.bc);
                lap += (f.at(i, jp) - 2.0 * f.at(i, j) + f.at(i, jm)) /
                       (f.dx(1) * f.dx(1));
            }
            next[i * ny + j] = f.at(i, j) +
                dt * (D * lap - kappa * f.at(i, j) + source[i * ny + j]);
        }
    }
    f.phi = std::move(next);
}

void step_chemical(ChemicalField& f, const std::vector<Vec>& positions,
                   const Bump& chi, double D, double kappa, double dt) {
    step_chemical_gridded(f, deposit_sources(f, positions, chi), D, kappa, dt);
}

} // namespace mfl
