"""Closed-form and mpmath references, independent of the package's quadrature."""
import mpmath as mp

mp.mp.dps = 30


def mean_log2_1p_exponential(gain, mean):
    """E[log2(1 + gain * X)] for X ~ Exp(mean): e^{1/c} E1(1/c) / ln 2, c = gain*mean."""
    if gain == 0:
        return mp.mpf(0)
    x = 1 / (mp.mpf(gain) * mp.mpf(mean))
    return mp.exp(x) * mp.e1(x) / mp.log(2)


def c2_closed_form(s_sr, s_sd, alpha, snr_rx, zeta):
    """Ergodic x2 rate; Y = min(gamma_sr, gamma_sd) is exponential."""
    mean_y = 1 / (1 / mp.mpf(s_sr) + 1 / mp.mpf(s_sd))
    return float(zeta * (mean_log2_1p_exponential(snr_rx, mean_y)
                         - mean_log2_1p_exponential(alpha * snr_rx, mean_y)))


def c1_conditional(s_sr, s_rd, cap, upsilon, p_source, zeta):
    """Ergodic x1 rate by conditioning on W, then averaging over gamma_sr exactly.

    Given W = w, Z = w * gamma_sr is exponential with mean w * s_sr.
    """
    scale = mp.mpf(upsilon) * s_rd
    atom = mp.exp(-cap / scale) * mean_log2_1p_exponential(p_source * cap, s_sr)

    def cont(w):
        return mean_log2_1p_exponential(p_source * w, s_sr) * mp.exp(-w / scale) / scale

    return float(zeta * (atom + mp.quad(cont, [0, cap * 1e-6, cap * 1e-3, cap])))


def c1_benchmark_closed_form(s_sr, s_rd, alpha, p_t, zeta):
    mean_v = 1 / (1 / (mp.mpf(alpha) * s_sr) + 1 / mp.mpf(s_rd))
    return float(zeta * mean_log2_1p_exponential(p_t, mean_v))
