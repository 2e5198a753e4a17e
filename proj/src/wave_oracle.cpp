// Copyright 2026 The qnd-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wave_oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace qnd::wave {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2 pi)

struct Strides {
    int n[3];
    std::size_t stride[3];
};

Strides strides_of(const WaveState& s) {
    Strides st;
    st.n[0] = s.grids[0].n;
    st.n[1] = s.grids[1].n;
    st.n[2] = s.grids[2].n;
    st.stride[2] = 1;
    st.stride[1] = static_cast<std::size_t>(st.n[2]);
    st.stride[0] = static_cast<std::size_t>(st.n[1]) * st.n[2];
    return st;
}

// One cached in-place plan pair per line length. Plans are created against a
// scratch buffer and executed on per-call buffers with identical alignment.
class FftPlan {
  public:
    static FftPlan& get(int n);

    void forward(complexd* data) const {
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }
    void backward(complexd* data) const {
        fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

  private:
    explicit FftPlan(int n) {
        scratch_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        fwd_ = fftw_plan_dft_1d(n, scratch_, scratch_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, scratch_, scratch_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_complex* scratch_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

FftPlan& FftPlan::get(int n) {
    static std::mutex mutex;
    static std::vector<std::pair<int, FftPlan*>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    for (auto& [len, plan] : cache) {
        if (len == n) {
            return *plan;
        }
    }
    cache.emplace_back(n, new FftPlan(n));
    return *cache.back().second;
}

struct AlignedBuffer {
    explicit AlignedBuffer(int n)
        : data(static_cast<complexd*>(fftw_malloc(sizeof(complexd) * n))) {
    }
    ~AlignedBuffer() {
        fftw_free(data);
    }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;
    complexd* data;
};

// Applies fn(line) to every 1-d line of the state along `axis`.
template <typename Fn>
void for_each_line(WaveState& s, int axis, Fn&& fn) {
    const Strides st = strides_of(s);
    const int a = axis;
    const int b = (axis + 1) % 3;
    const int c = (axis + 2) % 3;
    for (int ib = 0; ib < st.n[b]; ++ib) {
        for (int ic = 0; ic < st.n[c]; ++ic) {
            const std::size_t base = ib * st.stride[b] + ic * st.stride[c];
            fn(base, st.stride[a], st.n[a]);
        }
    }
}

}  // namespace

double WaveState::norm2() const {
    double sum = 0.0;
    for (const auto& a : amp) {
        sum += std::norm(a);
    }
    return sum * spacing(0) * spacing(1) * spacing(2);
}

void WaveState::normalize() {
    const double scale = 1.0 / std::sqrt(norm2());
    for (auto& a : amp) {
        a *= scale;
    }
}

std::vector<complexd> gaussian_1d(const Grid1D& g, double mean_base, double sigma_base,
                                  double sigma_conj, double mean_conj) {
    require(sigma_base > 0.0 && sigma_conj > 0.0, Status::InvalidArgument,
            "gaussian_1d requires positive spreads");
    require(sigma_base * sigma_conj >= 0.5 - 1e-12, Status::InvalidArgument,
            "gaussian_1d spreads below the Kennard bound are not realizable");

    const double a = 1.0 / (4.0 * sigma_base * sigma_base);
    const double chirp = std::sqrt(std::max(0.0, a * (sigma_conj * sigma_conj - a)));

    std::vector<complexd> amp(g.n);
    double norm2 = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double y = g.value(i) - mean_base;
        const double magnitude = std::exp(-a * y * y);
        const double phase = chirp * y * y + mean_conj * y;
        amp[i] = std::polar(magnitude, phase);
        norm2 += magnitude * magnitude;
    }
    norm2 *= g.spacing();
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& v : amp) {
        v *= scale;
    }
    return amp;
}

WaveState init_state(const Grid1D& grid_sys, const std::vector<complexd>& sys_amp,
                     const Grid1D& grid_px, const std::vector<complexd>& px_amp, Rep px_rep,
                     const Grid1D& grid_pk, const std::vector<complexd>& pk_amp, Rep pk_rep) {
    require(sys_amp.size() == static_cast<std::size_t>(grid_sys.n) &&
                px_amp.size() == static_cast<std::size_t>(grid_px.n) &&
                pk_amp.size() == static_cast<std::size_t>(grid_pk.n),
            Status::InvalidArgument, "amplitude sizes do not match the grids");

    WaveState s;
    s.grids = {grid_sys, grid_px, grid_pk};
    s.reps = {Rep::Base, px_rep, pk_rep};
    s.amp.resize(static_cast<std::size_t>(grid_sys.n) * grid_px.n * grid_pk.n);
    std::size_t idx = 0;
    for (int i = 0; i < grid_sys.n; ++i) {
        for (int j = 0; j < grid_px.n; ++j) {
            const complexd sj = sys_amp[i] * px_amp[j];
            for (int k = 0; k < grid_pk.n; ++k) {
                s.amp[idx++] = sj * pk_amp[k];
            }
        }
    }
    return s;
}

WaveState init_state(const Grid1D& grid_sys, const std::vector<complexd>& sys_amp,
                     const ProbePairWave& pair) {
    require(sys_amp.size() == static_cast<std::size_t>(grid_sys.n), Status::InvalidArgument,
            "system amplitude size does not match the grid");
    // The pair amplitude is sampled on (J_K, Phi_X); probe K therefore
    // starts in its conjugate representation, on a base grid whose
    // conjugate samples coincide with pair.grid_jk.
    const Grid1D grid_pk = Grid1D::from_conjugate(pair.grid_jk.n, pair.grid_jk.length);
    require(std::abs(pair.grid_jk.center) < 1e-12, Status::InvalidArgument,
            "the J_K sampling grid must be centered at zero");

    WaveState s;
    s.grids = {grid_sys, pair.grid_phix, grid_pk};
    s.reps = {Rep::Base, Rep::Base, Rep::Conj};
    const int npx = pair.grid_phix.n;
    const int npk = pair.grid_jk.n;
    s.amp.resize(static_cast<std::size_t>(grid_sys.n) * npx * npk);
    std::size_t idx = 0;
    for (int i = 0; i < grid_sys.n; ++i) {
        for (int j = 0; j < npx; ++j) {
            for (int k = 0; k < npk; ++k) {
                s.amp[idx++] = sys_amp[i] * pair.amp[static_cast<std::size_t>(k) * npx + j];
            }
        }
    }
    return s;
}

void to_rep(WaveState& s, int axis, Rep target) {
    if (s.reps[axis] == target) {
        return;
    }
    const Grid1D& g = s.grids[axis];
    const int n = g.n;
    // n is a power of two >= 16, so exp(-i pi n / 2) = 1 and the transform
    // phases reduce to the (-1)^j / (-1)^m checkerboard below.
    const FftPlan& plan = FftPlan::get(n);
    AlignedBuffer line(n);

    if (target == Rep::Conj) {
        // psi~(q_m) = h/sqrt(2pi) e^{-i q_m c} (-1)^m FFT[(-1)^j psi_j]_m
        const double scale = g.spacing() * kInvSqrt2Pi;
        std::vector<complexd> post(n);
        for (int m = 0; m < n; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            post[m] = scale * sign * std::polar(1.0, -g.conj_value(m) * g.center);
        }
        for_each_line(s, axis, [&](std::size_t base, std::size_t stride, int len) {
            for (int j = 0; j < len; ++j) {
                line.data[j] = (j % 2 == 0) ? s.amp[base + j * stride] : -s.amp[base + j * stride];
            }
            plan.forward(line.data);
            for (int m = 0; m < len; ++m) {
                s.amp[base + m * stride] = line.data[m] * post[m];
            }
        });
        s.reps[axis] = Rep::Conj;
    } else {
        // psi_j = dq/sqrt(2pi) (-1)^j IFFT[(-1)^m e^{+i q_m c} psi~_m]_j
        const double scale = g.conj_spacing() * kInvSqrt2Pi;
        std::vector<complexd> pre(n);
        for (int m = 0; m < n; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            pre[m] = sign * std::polar(1.0, g.conj_value(m) * g.center);
        }
        for_each_line(s, axis, [&](std::size_t base, std::size_t stride, int len) {
            for (int m = 0; m < len; ++m) {
                line.data[m] = s.amp[base + m * stride] * pre[m];
            }
            plan.backward(line.data);
            for (int j = 0; j < len; ++j) {
                const double sign = (j % 2 == 0) ? scale : -scale;
                s.amp[base + j * stride] = line.data[j] * sign;
            }
        });
        s.reps[axis] = Rep::Base;
    }
}

namespace {

// Multiplies by exp(i * strength * u_a * u_b) where u_a, u_b are the
// coordinates of two distinct axes in the given representations.
void apply_phase_pair(WaveState& s, int axis_a, Rep rep_a, int axis_b, Rep rep_b,
                      double strength) {
    to_rep(s, axis_a, rep_a);
    to_rep(s, axis_b, rep_b);
    const Strides st = strides_of(s);
    const int na = st.n[axis_a];
    const int nb = st.n[axis_b];

    std::vector<complexd> phase(static_cast<std::size_t>(na) * nb);
    for (int ia = 0; ia < na; ++ia) {
        const double va = s.coordinate(axis_a, ia);
        for (int ib = 0; ib < nb; ++ib) {
            phase[static_cast<std::size_t>(ia) * nb + ib] =
                std::polar(1.0, strength * va * s.coordinate(axis_b, ib));
        }
    }

    const int axis_c = 3 - axis_a - axis_b;
    const std::size_t sa = st.stride[axis_a];
    const std::size_t sb = st.stride[axis_b];
    const std::size_t sc = st.stride[axis_c];
    for (int ia = 0; ia < na; ++ia) {
        for (int ib = 0; ib < nb; ++ib) {
            const complexd f = phase[static_cast<std::size_t>(ia) * nb + ib];
            const std::size_t base = ia * sa + ib * sb;
            for (int ic = 0; ic < st.n[axis_c]; ++ic) {
                s.amp[base + ic * sc] *= f;
            }
        }
    }
}

}  // namespace

void apply_kick_x(WaveState& s, double strength) {
    apply_phase_pair(s, AxisSystem, Rep::Base, AxisProbeX, Rep::Base, strength);
}

void apply_kick_k(WaveState& s, double strength) {
    apply_phase_pair(s, AxisSystem, Rep::Conj, AxisProbeK, Rep::Base, strength);
}

void apply_sequential(WaveState& s, Ordering ordering) {
    require(ordering != Ordering::Joint, Status::InvalidArgument,
            "apply_sequential requires a sequential ordering");
    if (ordering == Ordering::XthenK) {
        apply_kick_x(s);
        apply_kick_k(s);
    } else {
        apply_kick_k(s);
        apply_kick_x(s);
    }
}

void apply_joint(WaveState& s) {
    // Rightmost factor first: the probe-probe phase, then the K stage, then
    // the X stage; each factor is diagonal in the representation selected by
    // apply_phase_pair.
    apply_phase_pair(s, AxisProbeX, Rep::Base, AxisProbeK, Rep::Base, 0.5);
    apply_kick_k(s);
    apply_kick_x(s);
}

void apply_joint_split_step(WaveState& s, int substeps) {
    require(substeps >= 1, Status::InvalidArgument, "substeps must be >= 1");
    const double dt = 1.0 / substeps;
    apply_kick_x(s, 0.5 * dt);
    for (int step = 0; step < substeps; ++step) {
        apply_kick_k(s, dt);
        apply_kick_x(s, step + 1 < substeps ? dt : 0.5 * dt);
    }
}

double state_distance(const WaveState& a, const WaveState& b) {
    require(a.amp.size() == b.amp.size(), Status::InvalidArgument,
            "states live on different grids");
    for (int axis = 0; axis < 3; ++axis) {
        require(a.reps[axis] == b.reps[axis] && a.grids[axis].n == b.grids[axis].n,
                Status::InvalidArgument, "states live on different grids or representations");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) {
        sum += std::norm(a.amp[i] - b.amp[i]);
    }
    return std::sqrt(sum * a.spacing(0) * a.spacing(1) * a.spacing(2));
}

ReadoutModel ReadoutModel::gaussian(double resolution) {
    require(resolution > 0.0, Status::InvalidArgument,
            "the gaussian readout family requires a positive resolution");
    return ReadoutModel{Family::Gaussian, resolution};
}

ProbabilityTable marginal_distribution(WaveState& s, int axis, Rep rep) {
    to_rep(s, axis, rep);

    const Strides st = strides_of(s);
    ProbabilityTable table;
    table.width = s.spacing(axis);
    table.values.resize(st.n[axis]);
    table.probs.assign(st.n[axis], 0.0);
    for (int m = 0; m < st.n[axis]; ++m) {
        table.values[m] = s.coordinate(axis, m);
    }
    const double weight = s.spacing(0) * s.spacing(1) * s.spacing(2);
    for_each_line(s, axis, [&](std::size_t base, std::size_t stride, int len) {
        for (int m = 0; m < len; ++m) {
            table.probs[m] += std::norm(s.amp[base + m * stride]);
        }
    });
    for (auto& p : table.probs) {
        p *= weight;
    }
    return table;
}

ProbabilityTable readout_distribution(WaveState& s, int probe_axis, const ReadoutModel& model) {
    require(probe_axis == AxisProbeX || probe_axis == AxisProbeK, Status::InvalidArgument,
            "readout axis must be a probe axis");
    ProbabilityTable table = marginal_distribution(s, probe_axis, Rep::Conj);
    if (model.family == ReadoutModel::Family::Gaussian) {
        return convolve_gaussian(table, model.resolution);
    }
    return table;
}

ProbabilityTable2D joint_readout_distribution(WaveState& s, const ReadoutModel& model_x,
                                              const ReadoutModel& model_k) {
    to_rep(s, AxisProbeX, Rep::Conj);
    to_rep(s, AxisProbeK, Rep::Conj);

    const Strides st = strides_of(s);
    ProbabilityTable2D table;
    table.width_x = s.spacing(AxisProbeX);
    table.width_y = s.spacing(AxisProbeK);
    table.values_x.resize(st.n[AxisProbeX]);
    table.values_y.resize(st.n[AxisProbeK]);
    for (int i = 0; i < st.n[AxisProbeX]; ++i) {
        table.values_x[i] = s.coordinate(AxisProbeX, i);
    }
    for (int k = 0; k < st.n[AxisProbeK]; ++k) {
        table.values_y[k] = s.coordinate(AxisProbeK, k);
    }
    table.probs.assign(static_cast<std::size_t>(st.n[AxisProbeX]) * st.n[AxisProbeK], 0.0);
    const double weight = s.spacing(0) * s.spacing(1) * s.spacing(2);
    std::size_t idx = 0;
    for (int i = 0; i < st.n[AxisSystem]; ++i) {
        for (int j = 0; j < st.n[AxisProbeX]; ++j) {
            for (int k = 0; k < st.n[AxisProbeK]; ++k) {
                table.probs[static_cast<std::size_t>(j) * st.n[AxisProbeK] + k] +=
                    std::norm(s.amp[idx++]);
            }
        }
    }
    for (auto& p : table.probs) {
        p *= weight;
    }
    return convolve_gaussian(table,
                             model_x.family == ReadoutModel::Family::Gaussian ? model_x.resolution
                                                                              : 0.0,
                             model_k.family == ReadoutModel::Family::Gaussian ? model_k.resolution
                                                                              : 0.0);
}

TableMoments measure_moments(const ProbabilityTable& t) {
    return table_moments(t);
}

TableMoments axis_moments(WaveState& s, int axis, Rep rep) {
    to_rep(s, axis, rep);
    const Strides st = strides_of(s);
    std::vector<double> marginal(st.n[axis], 0.0);
    for_each_line(s, axis, [&](std::size_t base, std::size_t stride, int len) {
        for (int m = 0; m < len; ++m) {
            marginal[m] += std::norm(s.amp[base + m * stride]);
        }
    });
    const double weight = s.spacing(0) * s.spacing(1) * s.spacing(2);
    double mean = 0.0;
    double total = 0.0;
    for (int m = 0; m < st.n[axis]; ++m) {
        mean += s.coordinate(axis, m) * marginal[m] * weight;
        total += marginal[m] * weight;
    }
    mean /= total;
    double var = 0.0;
    for (int m = 0; m < st.n[axis]; ++m) {
        const double d = s.coordinate(axis, m) - mean;
        var += d * d * marginal[m] * weight;
    }
    var /= total;
    return TableMoments{mean, var};
}

double pair_covariance(WaveState& s, int axis_a, Rep rep_a, int axis_b, Rep rep_b) {
    require(axis_a != axis_b, Status::InvalidArgument,
            "pair_covariance requires two distinct axes");
    to_rep(s, axis_a, rep_a);
    to_rep(s, axis_b, rep_b);

    const Strides st = strides_of(s);
    const int axis_c = 3 - axis_a - axis_b;
    const double weight = s.spacing(0) * s.spacing(1) * s.spacing(2);

    double mean_a = 0.0;
    double mean_b = 0.0;
    double mean_ab = 0.0;
    for (int ia = 0; ia < st.n[axis_a]; ++ia) {
        const double va = s.coordinate(axis_a, ia);
        for (int ib = 0; ib < st.n[axis_b]; ++ib) {
            const double vb = s.coordinate(axis_b, ib);
            double p = 0.0;
            const std::size_t base = ia * st.stride[axis_a] + ib * st.stride[axis_b];
            for (int ic = 0; ic < st.n[axis_c]; ++ic) {
                p += std::norm(s.amp[base + ic * st.stride[axis_c]]);
            }
            p *= weight;
            mean_a += va * p;
            mean_b += vb * p;
            mean_ab += va * vb * p;
        }
    }
    return mean_ab - mean_a * mean_b;
}

}  // namespace qnd::wave
