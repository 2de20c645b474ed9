// Closed-form S_Q(omega) for L::width frequencies at once.  Requires
// complex_lane.ipp.  Each line transcribes one coefficient; a1, a2 stand for
// (i w + gamma_c1/2), (i w + gamma_c2/2) and L1, L2 for the recurring
// quadratics Delta_j^2 - w^2 + gamma_cj^2/4 + i w gamma_cj.

template <class L>
inline void spectrum_block(const SpectrumInputs& in, const double* omega_ptr,
                           const double* thermal_ptr, double* out_ptr) {
  const L w = L::load(omega_ptr);
  const L w2 = w * w;

  const double D1 = in.Delta1;
  const double D2 = in.Delta2;
  const double lam = in.lambda;
  const double lam2 = lam * lam;
  const double wm = in.omega_m;

  const Cx<L> a1{L::broadcast(in.gamma_c1 / 2.0), w};
  const Cx<L> a2{L::broadcast(in.gamma_c2 / 2.0), w};
  const Cx<L> quad2{L::broadcast(D2 * D2 + in.gamma_c2 * in.gamma_c2 / 4.0) - w2,
                    w * L::broadcast(in.gamma_c2)};
  const Cx<L> quad1{L::broadcast(D1 * D1 + in.gamma_c1 * in.gamma_c1 / 4.0) - w2,
                    w * L::broadcast(in.gamma_c1)};
  const Cx<L> mech{L::broadcast(wm * wm) - w2, w * L::broadcast(in.gamma_m)};

  const Cx<L> c1 = a1 * quad2 + lam2 * a2;
  const Cx<L> c2 = quad2 * quad1 + lam2 * lam2 + (2.0 * lam2) * (a1 * a2 - D1 * D2);
  const Cx<L> c3 = (wm * in.G1) * (a1 * quad2 + lam2 * a2) + (lam * wm * in.G2 * D1) * a2 +
                   (lam * wm * in.G2 * D2) * a1;
  const Cx<L> c4 = quad2 * c2 *
                   (mech * c1 + (wm * in.G_cross * in.G_cross * D2) * a1 -
                    (lam * wm * in.G1 * in.G2) * a2);
  const Cx<L> c5 = c3 * ((lam * in.G2) * (c1 * a2) -
                         ((lam * in.G2 * D2) * cx<L>(1.0, 0.0) + in.G1 * quad2) *
                             (D1 * quad2 - lam2 * D2));
  const Cx<L> b = c4 - c5;

  const Cx<L> f_w = wm * (quad2 * c1 * c2);
  const Cx<L> f_x1 = in.sqrt_gamma_c1 * (quad2 * c1 * c3);
  const Cx<L> f_y1 =
      in.sqrt_gamma_c1 * (quad2 * ((lam * wm * in.G2) * (a2 * c2) +
                                   ((lam2 * D2) * cx<L>(1.0, 0.0) - D1 * quad2) * c3));
  const Cx<L> mix = D1 * a2 + D2 * a1;
  const Cx<L> f_x2 =
      in.sqrt_gamma_c2 * (quad2 * ((lam2 * wm * in.G2) * (mix * mix) +
                                   (wm * in.G2) * (c2 * a1 * a2) + (lam * wm * in.G1) * (c1 * mix)));
  const Cx<L> f_y2 =
      in.sqrt_gamma_c2 *
      (lam * (c3 * (((lam2 * D2 * D2) * cx<L>(1.0, 0.0) - (D1 * D2) * quad2) + c1 * a2)) -
       (wm * in.G2 * D2) * (c2 * a1 * quad2));

  const L thermal = L::load(thermal_ptr) * L::broadcast(in.thermal_scale);
  const L numerator = norm(f_w) * thermal + norm(f_x1) + norm(f_y1) + norm(f_x2) + norm(f_y2);
  (numerator / norm(b)).store(out_ptr);
}

template <class L>
inline void spectrum_run(const SpectrumInputs& in, const double* omega, const double* thermal,
                         double* out, std::size_t n) {
  constexpr std::size_t W = L::width;
  std::size_t k = 0;
  for (; k + W <= n; k += W) spectrum_block<L>(in, omega + k, thermal + k, out + k);
  if (k < n) {
    // Pad the tail with copies of the last point so every lane is valid.
    double w_pad[W], t_pad[W], o_pad[W];
    for (std::size_t j = 0; j < W; ++j) {
      const std::size_t src = (k + j < n) ? k + j : n - 1;
      w_pad[j] = omega[src];
      t_pad[j] = thermal[src];
    }
    spectrum_block<L>(in, w_pad, t_pad, o_pad);
    for (std::size_t j = 0; k + j < n; ++j) out[k + j] = o_pad[j];
  }
}
