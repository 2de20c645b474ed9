// Euler-Maruyama for kBatch independent trajectories.  With L::width ==
// kBatch all trajectories share one vector register per state component;
// with width 1 the same arithmetic runs lane by lane.

template <class L>
inline void em_run(const EulerStep& step, double* state, const double* noise, std::size_t steps,
                   double* q_out, double* state_out) {
  constexpr std::size_t W = L::width;
  static_assert(kBatch % W == 0);
  constexpr int kRowChannel[kStateDim] = {0, 1, 2, 3, -1, 4};

  for (std::size_t lane = 0; lane < kBatch; lane += W) {
    L x[kStateDim];
    for (std::size_t r = 0; r < kStateDim; ++r) x[r] = L::load(state + r * kBatch + lane);

    L prop[kStateDim * kStateDim];
    for (std::size_t i = 0; i < kStateDim * kStateDim; ++i) {
      prop[i] = L::broadcast(step.propagator[i]);
    }
    L scale[kNoiseChannels];
    for (std::size_t c = 0; c < kNoiseChannels; ++c) scale[c] = L::broadcast(step.noise_scale[c]);

    for (std::size_t n = 0; n < steps; ++n) {
      const double* xi = noise + n * kNoiseChannels * kBatch + lane;
      L next[kStateDim];
      for (std::size_t r = 0; r < kStateDim; ++r) {
        L acc = prop[r * kStateDim] * x[0];
        for (std::size_t c = 1; c < kStateDim; ++c) acc = acc + prop[r * kStateDim + c] * x[c];
        if (kRowChannel[r] >= 0) {
          const std::size_t ch = static_cast<std::size_t>(kRowChannel[r]);
          acc = acc + scale[ch] * L::load(xi + ch * kBatch);
        }
        next[r] = acc;
      }
      for (std::size_t r = 0; r < kStateDim; ++r) x[r] = next[r];
      if (q_out) x[4].store(q_out + n * kBatch + lane);
      if (state_out) {
        double* row = state_out + n * kStateDim * kBatch + lane;
        for (std::size_t r = 0; r < kStateDim; ++r) x[r].store(row + r * kBatch);
      }
    }

    for (std::size_t r = 0; r < kStateDim; ++r) x[r].store(state + r * kBatch + lane);
  }
}
