// Complex arithmetic over a lane type L (scalar or vector).  Included inside
// a TU-private namespace; the operation order here is part of the
// bitwise-equivalence contract between kernel variants.

template <class L>
struct Cx {
  L re, im;
};

template <class L>
inline Cx<L> cx(double re, double im) {
  return {L::broadcast(re), L::broadcast(im)};
}

template <class L>
inline Cx<L> operator+(Cx<L> a, Cx<L> b) {
  return {a.re + b.re, a.im + b.im};
}

template <class L>
inline Cx<L> operator-(Cx<L> a, Cx<L> b) {
  return {a.re - b.re, a.im - b.im};
}

template <class L>
inline Cx<L> operator*(Cx<L> a, Cx<L> b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class L>
inline Cx<L> operator*(double s, Cx<L> a) {
  const L k = L::broadcast(s);
  return {k * a.re, k * a.im};
}

template <class L>
inline Cx<L> operator+(Cx<L> a, double s) {
  return {a.re + L::broadcast(s), a.im};
}

template <class L>
inline Cx<L> operator-(Cx<L> a, double s) {
  return {a.re - L::broadcast(s), a.im};
}

template <class L>
inline L norm(Cx<L> a) {
  return a.re * a.re + a.im * a.im;
}
