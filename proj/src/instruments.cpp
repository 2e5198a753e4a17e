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

#include "instruments.hpp"

#include <cmath>
#include <numbers>

#include "philox.hpp"

namespace qnd::inst {

namespace {

void check_dims(int total) {
    require(total >= 2 && total <= kMaxTotalDim, Status::InvalidArgument,
            "total dimension out of the supported dense range");
}

Mat big_state(const Mat& u, const FiniteState& rho_det, const FiniteState& rho_sys) {
    const int total = rho_det.dim() * rho_sys.dim();
    check_dims(total);
    require(u.rows() == total && u.cols() == total, Status::InvalidArgument,
            "unitary dimension does not match probe x system");
    require((u * u.adjoint() - Mat::Identity(total, total)).cwiseAbs().maxCoeff() < 1e-12,
            Status::InvalidArgument, "interaction operator is not unitary");
    return u * kron(rho_det.rho, rho_sys.rho) * u.adjoint();
}

// <J|U|I> as an operator on the system space, for probe vectors J and I.
Mat probe_matrix_element(const Mat& u, const Eigen::VectorXcd& bra_j,
                         const Eigen::VectorXcd& ket_i, int sys_dim) {
    const int probe_dim = static_cast<int>(bra_j.size());
    Mat out = Mat::Zero(sys_dim, sys_dim);
    for (int p = 0; p < probe_dim; ++p) {
        if (std::norm(bra_j(p)) == 0.0) {
            continue;
        }
        for (int q = 0; q < probe_dim; ++q) {
            if (std::norm(ket_i(q)) == 0.0) {
                continue;
            }
            const std::complex<double> weight = std::conj(bra_j(p)) * ket_i(q);
            for (int s = 0; s < sys_dim; ++s) {
                for (int t = 0; t < sys_dim; ++t) {
                    out(s, t) += weight * u(p * sys_dim + s, q * sys_dim + t);
                }
            }
        }
    }
    return out;
}

}  // namespace

FiniteState FiniteState::make(Mat m, double tol) {
    require(m.rows() == m.cols() && m.rows() >= 1, Status::InvalidArgument,
            "density matrix must be square");
    require((m - m.adjoint()).cwiseAbs().maxCoeff() <= tol, Status::InvalidArgument,
            "density matrix is not Hermitian");
    require(std::abs(m.trace().real() - 1.0) <= tol && std::abs(m.trace().imag()) <= tol,
            Status::InvalidArgument, "density matrix trace is not one");
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    require(es.eigenvalues().minCoeff() >= -tol, Status::InvalidArgument,
            "density matrix has a negative eigenvalue");
    return FiniteState{std::move(m)};
}

void ReadoutFamily::validate(double tol) const {
    require(!effects.empty(), Status::InvalidArgument, "readout family is empty");
    const int d = dim();
    Mat sum = Mat::Zero(d, d);
    for (const Mat& f : effects) {
        require(f.rows() == d && f.cols() == d, Status::InvalidArgument,
                "readout family has mismatched dimensions");
        require((f - f.adjoint()).cwiseAbs().maxCoeff() <= tol, Status::InvalidArgument,
                "readout effect is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Mat> es(f);
        require(es.eigenvalues().minCoeff() >= -tol, Status::InvalidArgument,
                "readout effect is not positive");
        sum += f;
    }
    require((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= tol, Status::InvalidArgument,
            "readout family does not sum to the identity");
}

bool ReadoutFamily::commuting(double tol) const {
    for (std::size_t i = 0; i < effects.size(); ++i) {
        for (std::size_t j = i + 1; j < effects.size(); ++j) {
            const Mat comm = effects[i] * effects[j] - effects[j] * effects[i];
            if (comm.cwiseAbs().maxCoeff() > tol) {
                return false;
            }
        }
    }
    return true;
}

ReadoutFamily ReadoutFamily::projective(int dim) {
    ReadoutFamily f;
    for (int j = 0; j < dim; ++j) {
        Mat p = Mat::Zero(dim, dim);
        p(j, j) = 1.0;
        f.effects.push_back(p);
    }
    return f;
}

Mat Instrument::apply(int mu, const Mat& rho_sys) const {
    const auto& ops = kraus.at(mu);
    Mat out = Mat::Zero(rho_sys.rows(), rho_sys.cols());
    for (const Mat& m : ops) {
        out += m * rho_sys * m.adjoint();
    }
    return out;
}

Mat Instrument::apply_all(const Mat& rho_sys) const {
    Mat out = Mat::Zero(rho_sys.rows(), rho_sys.cols());
    for (int mu = 0; mu < outcomes(); ++mu) {
        out += apply(mu, rho_sys);
    }
    return out;
}

Mat Instrument::effect(int mu) const {
    const auto& ops = kraus.at(mu);
    require(!ops.empty(), Status::Internal, "instrument outcome has no operations");
    Mat out = Mat::Zero(ops.front().cols(), ops.front().cols());
    for (const Mat& m : ops) {
        out += m.adjoint() * m;
    }
    return out;
}

std::vector<double> born_probability(const ReadoutFamily& f, const Mat& u,
                                     const FiniteState& rho_det, const FiniteState& rho_sys) {
    f.validate();
    require(f.dim() == rho_det.dim(), Status::InvalidArgument,
            "readout family does not match the probe dimension");
    const Mat sigma = big_state(u, rho_det, rho_sys);
    const Mat id_sys = Mat::Identity(rho_sys.dim(), rho_sys.dim());

    std::vector<double> probs(f.outcomes());
    for (int mu = 0; mu < f.outcomes(); ++mu) {
        probs[mu] = (kron(f.effects[mu], id_sys) * sigma).trace().real();
    }
    return probs;
}

FiniteState conditional_state(const ReadoutFamily& f, const Mat& u, const FiniteState& rho_det,
                              const FiniteState& rho_sys, int mu) {
    f.validate();
    const Mat sigma = big_state(u, rho_det, rho_sys);
    const Mat id_sys = Mat::Identity(rho_sys.dim(), rho_sys.dim());
    const Mat selected = kron(f.effects.at(mu), id_sys) * sigma;
    const double p = selected.trace().real();
    require(p > 1e-14, Status::InvalidArgument,
            "conditional state is undefined for a zero-probability outcome");
    const Mat reduced =
        partial_trace(selected, {rho_det.dim(), rho_sys.dim()}, {1}) / p;
    // Symmetrize away the tiny anti-Hermitian residue of F*sigma.
    return FiniteState::make((reduced + reduced.adjoint()) / 2.0, 1e-9);
}

Instrument build_instrument(const ReadoutFamily& f, const Mat& u, const FiniteState& rho_det) {
    f.validate();
    const int probe_dim = rho_det.dim();
    const int sys_dim = static_cast<int>(u.rows()) / probe_dim;
    require(probe_dim * sys_dim == u.rows(), Status::InvalidArgument,
            "unitary dimension does not match probe x system");

    Eigen::SelfAdjointEigenSolver<Mat> prep(rho_det.rho);
    std::vector<std::pair<double, Eigen::VectorXcd>> preparation;
    for (int i = 0; i < probe_dim; ++i) {
        const double w = prep.eigenvalues()(i);
        if (w > 1e-14) {
            preparation.emplace_back(w, prep.eigenvectors().col(i));
        }
    }

    Instrument instrument;
    instrument.kraus.resize(f.outcomes());

    if (f.commuting()) {
        // Common eigenbasis |J> from a generic combination of the effects.
        Mat h = Mat::Zero(probe_dim, probe_dim);
        for (int mu = 0; mu < f.outcomes(); ++mu) {
            h += std::sqrt(2.0 * mu + 3.0) * f.effects[mu];
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const Mat basis = es.eigenvectors();
        for (int mu = 0; mu < f.outcomes(); ++mu) {
            const Mat diag = basis.adjoint() * f.effects[mu] * basis;
            require(
                (diag - Mat(diag.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-8,
                Status::Internal, "common readout eigenbasis construction failed");
            for (int j = 0; j < probe_dim; ++j) {
                const double p = std::max(diag(j, j).real(), 0.0);
                if (p < 1e-14) {
                    continue;
                }
                for (const auto& [w, ket] : preparation) {
                    instrument.kraus[mu].push_back(
                        std::sqrt(p * w) * probe_matrix_element(u, basis.col(j), ket, sys_dim));
                }
            }
        }
    } else {
        // Noncommuting readout: use each outcome's own eigenbasis |mu:J>.
        for (int mu = 0; mu < f.outcomes(); ++mu) {
            Eigen::SelfAdjointEigenSolver<Mat> es(f.effects[mu]);
            for (int j = 0; j < probe_dim; ++j) {
                const double p = std::max(es.eigenvalues()(j), 0.0);
                if (p < 1e-14) {
                    continue;
                }
                for (const auto& [w, ket] : preparation) {
                    instrument.kraus[mu].push_back(
                        std::sqrt(p * w) *
                        probe_matrix_element(u, es.eigenvectors().col(j), ket, sys_dim));
                }
            }
        }
    }

    for (auto& ops : instrument.kraus) {
        if (ops.empty()) {
            ops.push_back(Mat::Zero(sys_dim, sys_dim));
        }
    }
    return instrument;
}

double swapped_correlation(const FiniteState& rho_det_ab, int dim_a, int dim_b, const Mat& u_a,
                           const FiniteState& rho_sys) {
    require(dim_a * dim_b == rho_det_ab.dim(), Status::InvalidArgument,
            "probe-pair state does not factor into the stated dimensions");
    const int dim_s = rho_sys.dim();
    check_dims(dim_a * dim_b * dim_s);
    require(u_a.rows() == dim_a * dim_s && u_a.cols() == dim_a * dim_s, Status::InvalidArgument,
            "first interaction must act on probe A x system");

    const std::vector<int> dims = {dim_a, dim_b, dim_s};
    const Mat u_full = embed(u_a, dims, {0, 2});
    const Mat sigma = u_full * kron(rho_det_ab.rho, rho_sys.rho) * u_full.adjoint();

    const Mat rho_b_sys = partial_trace(sigma, dims, {1, 2});
    const Mat rho_b = partial_trace(rho_b_sys, {dim_b, dim_s}, {0});
    const Mat rho_s = partial_trace(rho_b_sys, {dim_b, dim_s}, {1});
    return trace_norm(rho_b_sys - kron(rho_b, rho_s));
}

FactorizationCheck sequential_factorization_check(const FiniteState& rho_det_ab, int dim_a,
                                                  int dim_b, const Mat& u_a, const Mat& u_b,
                                                  const ReadoutFamily& f_a,
                                                  const ReadoutFamily& f_b,
                                                  const FiniteState& rho_sys) {
    require(dim_a * dim_b == rho_det_ab.dim(), Status::InvalidArgument,
            "probe-pair state does not factor into the stated dimensions");
    const int dim_s = rho_sys.dim();
    check_dims(dim_a * dim_b * dim_s);
    f_a.validate();
    f_b.validate();

    const std::vector<int> dims = {dim_a, dim_b, dim_s};
    const Mat chain = embed(u_b, dims, {1, 2}) * embed(u_a, dims, {0, 2});
    const Mat sigma = chain * kron(rho_det_ab.rho, rho_sys.rho) * chain.adjoint();
    const Mat id_sys = Mat::Identity(dim_s, dim_s);

    FactorizationCheck check;
    check.joint.resize(f_a.outcomes(), f_b.outcomes());
    for (int a = 0; a < f_a.outcomes(); ++a) {
        for (int b = 0; b < f_b.outcomes(); ++b) {
            const Mat proj = kron(kron(f_a.effects[a], f_b.effects[b]), id_sys);
            check.joint(a, b) = (proj * sigma).trace().real();
        }
    }

    const FiniteState rho_a =
        FiniteState::make(partial_trace(rho_det_ab.rho, {dim_a, dim_b}, {0}), 1e-9);
    const FiniteState rho_b =
        FiniteState::make(partial_trace(rho_det_ab.rho, {dim_a, dim_b}, {1}), 1e-9);
    const Instrument inst_a = build_instrument(f_a, u_a, rho_a);
    const Instrument inst_b = build_instrument(f_b, u_b, rho_b);

    check.composed.resize(f_a.outcomes(), f_b.outcomes());
    for (int a = 0; a < f_a.outcomes(); ++a) {
        const Mat after_a = inst_a.apply(a, rho_sys.rho);
        for (int b = 0; b < f_b.outcomes(); ++b) {
            check.composed(a, b) = inst_b.apply(b, after_a).trace().real();
        }
    }

    check.max_discrepancy = (check.joint - check.composed).cwiseAbs().maxCoeff();
    return check;
}

double feedback_deviation(const Instrument& instrument) {
    double worst = 0.0;
    for (const auto& ops : instrument.kraus) {
        for (const Mat& m : ops) {
            const double scale = m.norm();
            if (scale < 1e-14) {
                continue;
            }
            Eigen::SelfAdjointEigenSolver<Mat> es(m.adjoint() * m);
            Mat root = es.eigenvectors();
            Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            root = root * vals.asDiagonal() * root.adjoint();
            worst = std::max(worst, (m - root).norm() / scale);
        }
    }
    return worst;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

std::vector<int> unindex(int flat, const std::vector<int>& dims) {
    std::vector<int> idx(dims.size());
    for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
        idx[f] = flat % dims[f];
        flat /= dims[f];
    }
    return idx;
}

}  // namespace

Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
    int total = 1;
    for (int d : dims) {
        total *= d;
    }
    require(m.rows() == total && m.cols() == total, Status::InvalidArgument,
            "partial_trace dimensions do not match the matrix");
    int keep_dim = 1;
    for (int f : keep) {
        keep_dim *= dims[f];
    }

    auto keep_index = [&](const std::vector<int>& idx) {
        int flat = 0;
        for (int f : keep) {
            flat = flat * dims[f] + idx[f];
        }
        return flat;
    };

    Mat out = Mat::Zero(keep_dim, keep_dim);
    for (int r = 0; r < total; ++r) {
        const std::vector<int> ri = unindex(r, dims);
        for (int c = 0; c < total; ++c) {
            const std::vector<int> ci = unindex(c, dims);
            bool traced_match = true;
            for (std::size_t f = 0; f < dims.size(); ++f) {
                const bool kept =
                    std::find(keep.begin(), keep.end(), static_cast<int>(f)) != keep.end();
                if (!kept && ri[f] != ci[f]) {
                    traced_match = false;
                    break;
                }
            }
            if (traced_match) {
                out(keep_index(ri), keep_index(ci)) += m(r, c);
            }
        }
    }
    return out;
}

Mat embed(const Mat& op, const std::vector<int>& dims, const std::vector<int>& factors) {
    int total = 1;
    for (int d : dims) {
        total *= d;
    }
    int sub = 1;
    for (int f : factors) {
        sub *= dims[f];
    }
    require(op.rows() == sub && op.cols() == sub, Status::InvalidArgument,
            "embedded operator does not match the listed factors");

    auto sub_index = [&](const std::vector<int>& idx) {
        int flat = 0;
        for (int f : factors) {
            flat = flat * dims[f] + idx[f];
        }
        return flat;
    };

    Mat out = Mat::Zero(total, total);
    for (int r = 0; r < total; ++r) {
        const std::vector<int> ri = unindex(r, dims);
        for (int c = 0; c < total; ++c) {
            const std::vector<int> ci = unindex(c, dims);
            bool identity_match = true;
            for (std::size_t f = 0; f < dims.size(); ++f) {
                const bool acted =
                    std::find(factors.begin(), factors.end(), static_cast<int>(f)) !=
                    factors.end();
                if (!acted && ri[f] != ci[f]) {
                    identity_match = false;
                    break;
                }
            }
            if (identity_match) {
                out(r, c) = op(sub_index(ri), sub_index(ci));
            }
        }
    }
    return out;
}

double trace_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

Mat controlled_shift(int probe_dim, int sys_dim) {
    Mat shift = Mat::Zero(probe_dim, probe_dim);
    for (int j = 0; j < probe_dim; ++j) {
        shift((j + 1) % probe_dim, j) = 1.0;
    }
    Mat u = Mat::Zero(probe_dim * sys_dim, probe_dim * sys_dim);
    Mat power = Mat::Identity(probe_dim, probe_dim);
    for (int s = 0; s < sys_dim; ++s) {
        Mat sel = Mat::Zero(sys_dim, sys_dim);
        sel(s, s) = 1.0;
        u += kron(power, sel);
        power = shift * power;
    }
    return u;
}

FiniteState max_entangled(int dim) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim * dim);
    for (int i = 0; i < dim; ++i) {
        psi(i * dim + i) = 1.0 / std::sqrt(static_cast<double>(dim));
    }
    return FiniteState{psi * psi.adjoint()};
}

FiniteState random_state(int dim, std::uint64_t seed, std::uint64_t stream) {
    mc::CounterRng rng(seed, stream);
    auto normal = [&rng]() {
        const double u1 = std::max(rng.uniform(), 1e-300);
        const double u2 = rng.uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            g(i, j) = std::complex<double>(normal(), normal());
        }
    }
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return FiniteState{std::move(rho)};
}

}  // namespace qnd::inst
