// One noisy RIS link at the default 16x16x16 operating point, estimated three ways.

#include "hdr/hdr.hpp"

#include <cstdio>

int main()
{
    const hdr::SystemDims dims; // 4x4 arrays everywhere, T = K = 16
    std::mt19937_64 rng(2024);

    const auto params = hdr::sample_params(rng);
    const auto channel = hdr::build_channels(dims, params);
    const auto training = hdr::make_training(dims);
    const auto plan = hdr::build_permutations(dims);

    const double snr_db = 0.0;
    const double noise_variance = std::pow(10.0, -snr_db / 10.0);
    const auto obs = hdr::simulate_observation(channel, training, noise_variance, rng());
    const auto filtered = hdr::matched_filter(obs, training);

    const auto hdr_est = hdr::hdr_estimate(filtered, plan, dims);
    const auto krf_est = hdr::krf_estimate(filtered, dims);
    const auto ls_est = hdr::ls_estimate(filtered);

    std::printf("SNR %.1f dB\n", snr_db);
    for (const auto* est : {&hdr_est, &krf_est, &ls_est})
        std::printf("  %-3s  NMSE %.3e   SE %.2f bit/s/Hz\n", std::string(hdr::method_name(est->method)).c_str(),
                    hdr::nmse(channel.khatri_rao, est->khatri_rao),
                    hdr::spectral_efficiency(channel, *est, dims, 1.0, noise_variance));
    std::printf("  ideal SE %.2f bit/s/Hz\n", hdr::ideal_spectral_efficiency(dims, 1.0, noise_variance));

    const auto f_true = hdr::spatial_frequencies(params.bs_departure);
    std::printf("BS azimuth frequency: true %.4f rad, HDR %.4f rad\n", f_true.y,
                hdr::extract_spatial_frequency(hdr_est.components->bs_y));
}
