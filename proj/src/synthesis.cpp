#include "tnprep/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

namespace tnprep {

namespace {

constexpr int kHardCap = 14;  // per-half T budget; MITM doubles it

// code layout: bits 0..4 clifford index, 5..18 syllable bits (0 = HT,
// 1 = SHT, syllable 1 at bit 5), 19..22 syllable count, 23 leading-T flag
constexpr std::uint32_t kCliffordMask = 31;
constexpr int kSylShift = 5;
constexpr int kCountShift = 19;
constexpr int kLeadShift = 23;

struct CliffordTable {
  std::vector<std::vector<CtGateKind>> words;  // application order
  std::vector<Mat2> mats;
};

// BFS over {H, S} words, deduped by phase-invariant distance; identity is
// class 0 with the empty word
const CliffordTable& clifford_table() {
  static const CliffordTable tab = [] {
    CliffordTable t;
    t.words.push_back({});
    t.mats.push_back(Mat2::Identity());
    for (std::size_t head = 0; head < t.words.size(); ++head) {
      for (const CtGateKind g : {CtGateKind::kH, CtGateKind::kS}) {
        const Mat2 m = ct_gate_matrix(g) * t.mats[head];
        bool known = false;
        for (const Mat2& c : t.mats)
          if (ct_distance(m, c) < 1e-6) {
            known = true;
            break;
          }
        if (known) continue;
        auto w = t.words[head];
        w.push_back(g);
        t.words.push_back(std::move(w));
        t.mats.push_back(m);
      }
    }
    if (t.words.size() != 24)
      throw Error("clifford enumeration did not close at 24 classes");
    return t;
  }();
  return tab;
}

std::array<double, 4> su2_quat(const Mat2& m) {
  const cplx root = std::sqrt(m.determinant());
  const cplx a = m(0, 0) / root, b = m(0, 1) / root;
  return {a.real(), a.imag(), b.real(), b.imag()};
}

void canonical_sign(std::array<double, 4>* q) {
  for (double v : *q) {
    if (std::abs(v) <= 1e-12) continue;
    if (v < 0.0)
      for (double& x : *q) x = -x;
    break;
  }
}

Mat2 quat_mat(const std::array<double, 4>& q) {
  const cplx a(q[0], q[1]), b(q[2], q[3]);
  Mat2 m;
  m << a, b, -std::conj(b), std::conj(a);
  return m;
}

double quat_dist(const std::array<double, 4>& p,
                 const std::array<double, 4>& q) {
  double dot = 0.0;
  for (int k = 0; k < 4; ++k) dot += p[k] * q[k];
  return std::sqrt(std::max(0.0, 1.0 - std::abs(dot)));
}

struct Candidate {
  double d = 1e300;
  std::uint64_t key = ~std::uint64_t(0);
  std::vector<CtGateKind> gates;
  int t = -1;
};

void consider(Candidate* best, double d, std::uint64_t key,
              std::vector<CtGateKind> gates, int t) {
  if (d < best->d || (d == best->d && key < best->key)) {
    best->d = d;
    best->key = key;
    best->gates = std::move(gates);
    best->t = t;
  }
}

CliffordTSequence finish(const Candidate& cand, const Mat2& target) {
  CliffordTSequence seq;
  seq.gates = cand.gates;
  seq.t_count = 0;
  for (const CtGateKind g : seq.gates)
    seq.t_count += (g == CtGateKind::kT || g == CtGateKind::kTdg);
  const Mat2 prod = word_unitary(seq.gates);
  seq.achieved_error = ct_distance(prod, target);
  seq.global_phase = std::arg((prod.adjoint() * target).trace());
  return seq;
}

CliffordTSequence synth_target(const Mat2& target, double eps,
                               const SynthesisDatabase& db) {
  if (eps <= 0.0) throw ValidationError("synthesis: eps must be > 0");
  if (db.levels.empty() || db.level_trees.size() != db.levels.size())
    throw ValidationError("synthesis: database is empty");
  const double radius = std::sqrt(2.0) * eps;
  std::array<double, 4> p = su2_quat(target);
  std::array<double, 4> pm = p;
  for (double& v : pm) v = -v;

  std::vector<int> hits;
  for (int t = 0; t < static_cast<int>(db.levels.size()); ++t) {
    hits.clear();
    db.level_trees[t].query(p, radius, &hits);
    db.level_trees[t].query(pm, radius, &hits);
    Candidate best;
    for (const int idx : hits) {
      const NormalForm& nf = db.levels[t][idx];
      auto gates = decode_word(nf.code);
      const double d = ct_distance(word_unitary(gates), target);
      if (d <= eps) consider(&best, d, nf.code, std::move(gates), t);
    }
    if (best.t >= 0) return finish(best, target);
  }
  if (!db.split_tree.empty()) {
    const Mat2 target_su = quat_mat(p);
    for (int tau = db.t_budget + 1; tau <= 2 * db.t_budget; ++tau) {
      const int a = tau - db.t_budget;
      Candidate best;
      for (const int ia : db.identity_clifford[a]) {
        const NormalForm& na = db.levels[a][ia];
        const Mat2 am = quat_mat(na.q);
        std::array<double, 4> pr = su2_quat(am.adjoint() * target_su);
        std::array<double, 4> prm = pr;
        for (double& v : prm) v = -v;
        hits.clear();
        db.split_tree.query(pr, radius, &hits);
        db.split_tree.query(prm, radius, &hits);
        for (const int ib : hits) {
          const NormalForm& nb = db.levels[db.t_budget][ib];
          auto gates = decode_word(nb.code);
          const auto tail = decode_word(na.code);
          gates.insert(gates.end(), tail.begin(), tail.end());
          const double d = ct_distance(word_unitary(gates), target);
          if (d <= eps)
            consider(&best, d,
                     (std::uint64_t(na.code) << 32) | nb.code,
                     std::move(gates), tau);
        }
      }
      if (best.t >= 0) return finish(best, target);
    }
  }
  // nothing within eps: report the best direct-level approximation
  double best_d = 1e300;
  int best_t = -1;
  for (int t = 0; t < static_cast<int>(db.levels.size()); ++t)
    for (const NormalForm& nf : db.levels[t]) {
      const double d = quat_dist(nf.q, p);
      if (d < best_d) {
        best_d = d;
        best_t = t;
      }
    }
  throw SynthesisError("synthesis: eps unreachable within the T budget",
                       best_d, best_t);
}

Mat2 rot_op_matrix(const RotOp& op) {
  switch (op.kind) {
    case RotOpKind::kRz: {
      Mat2 m = Mat2::Zero();
      m(0, 0) = std::polar(1.0, -op.theta / 2.0);
      m(1, 1) = std::polar(1.0, op.theta / 2.0);
      return m;
    }
    case RotOpKind::kH:
      return ct_gate_matrix(CtGateKind::kH);
    case RotOpKind::kS:
      return ct_gate_matrix(CtGateKind::kS);
    case RotOpKind::kSdg:
      return ct_gate_matrix(CtGateKind::kSdg);
    case RotOpKind::kZ:
      return ct_gate_matrix(CtGateKind::kZ);
    case RotOpKind::kX:
      return ct_gate_matrix(CtGateKind::kX);
    default:
      throw ValidationError("rot_op_matrix: not a single-qubit op");
  }
}

CtGateKind ct_kind_of(RotOpKind k) {
  switch (k) {
    case RotOpKind::kH:
      return CtGateKind::kH;
    case RotOpKind::kS:
      return CtGateKind::kS;
    case RotOpKind::kSdg:
      return CtGateKind::kSdg;
    case RotOpKind::kZ:
      return CtGateKind::kZ;
    case RotOpKind::kX:
      return CtGateKind::kX;
    default:
      throw ValidationError("ct_kind_of: not a clifford rotation op");
  }
}

}  // namespace

Mat2 ct_gate_matrix(CtGateKind k) {
  const cplx im(0.0, 1.0);
  switch (k) {
    case CtGateKind::kH:
      return (Mat2() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    case CtGateKind::kS:
      return (Mat2() << 1, 0, 0, im).finished();
    case CtGateKind::kSdg:
      return (Mat2() << 1, 0, 0, -im).finished();
    case CtGateKind::kT:
      return (Mat2() << 1, 0, 0, std::polar(1.0, kPi / 4.0)).finished();
    case CtGateKind::kTdg:
      return (Mat2() << 1, 0, 0, std::polar(1.0, -kPi / 4.0)).finished();
    case CtGateKind::kX:
      return (Mat2() << 0, 1, 1, 0).finished();
    case CtGateKind::kZ:
      return (Mat2() << 1, 0, 0, -1).finished();
    case CtGateKind::kCx:
      break;
  }
  throw ValidationError("ct_gate_matrix: not a single-qubit gate");
}

std::vector<CtGateKind> decode_word(std::uint32_t code) {
  const auto& tab = clifford_table();
  const std::uint32_t ci = code & kCliffordMask;
  const int nsyl = static_cast<int>((code >> kCountShift) & 15);
  const bool lead = (code >> kLeadShift) & 1;
  if (ci >= 24 || nsyl > kHardCap)
    throw ValidationError("decode_word: malformed code");
  std::vector<CtGateKind> gates = tab.words[ci];
  for (int m = nsyl - 1; m >= 0; --m) {
    gates.push_back(CtGateKind::kT);
    gates.push_back(CtGateKind::kH);
    if ((code >> (kSylShift + m)) & 1) gates.push_back(CtGateKind::kS);
  }
  if (lead) gates.push_back(CtGateKind::kT);
  return gates;
}

Mat2 word_unitary(const std::vector<CtGateKind>& gates) {
  Mat2 u = Mat2::Identity();
  for (const CtGateKind g : gates) u = ct_gate_matrix(g) * u;
  return u;
}

double ct_distance(const Mat2& u, const Mat2& v) {
  return std::sqrt(
      std::max(0.0, 1.0 - std::abs((u.adjoint() * v).trace()) / 2.0));
}

void QuatKdTree::build(const std::vector<NormalForm>& entries,
                       std::vector<int> subset) {
  nodes_.clear();
  nodes_.reserve(subset.size());
  root_ = build_rec(subset, 0, static_cast<int>(subset.size()), 0, entries);
}

int QuatKdTree::build_rec(std::vector<int>& idx, int lo, int hi, int depth,
                          const std::vector<NormalForm>& entries) {
  if (lo >= hi) return -1;
  const int axis = depth % 4;
  const int mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](int a, int b) {
                     return entries[a].q[axis] < entries[b].q[axis];
                   });
  const int me = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{entries[idx[mid]].q, idx[mid], -1, -1, axis});
  const int left = build_rec(idx, lo, mid, depth + 1, entries);
  const int right = build_rec(idx, mid + 1, hi, depth + 1, entries);
  nodes_[me].left = left;
  nodes_[me].right = right;
  return me;
}

void QuatKdTree::query(const std::array<double, 4>& p, double radius,
                       std::vector<int>* out) const {
  if (root_ < 0) return;
  const double r2 = radius * radius;
  std::vector<int> stack = {root_};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    double d2 = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = p[k] - n.q[k];
      d2 += d * d;
    }
    if (d2 <= r2) out->push_back(n.entry);
    const double diff = p[n.axis] - n.q[n.axis];
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    if (near >= 0) stack.push_back(near);
    if (far >= 0 && diff * diff <= r2) stack.push_back(far);
  }
}

SynthesisDatabase build_database(int t_budget) {
  if (t_budget < 0 || t_budget > kHardCap)
    throw ValidationError("build_database: t_budget must be in 0..14");
  const auto& tab = clifford_table();
  SynthesisDatabase db;
  db.t_budget = t_budget;
  db.levels.resize(t_budget + 1);
  db.level_trees.resize(t_budget + 1);
  db.identity_clifford.resize(t_budget + 1);

  struct Prefix {
    Mat2 m;
    std::uint32_t code = 0;  // syllable/lead bits and count, clifford 0
    int nsyl = 0;
  };
  const Mat2 ht =
      ct_gate_matrix(CtGateKind::kH) * ct_gate_matrix(CtGateKind::kT);
  const Mat2 sht = ct_gate_matrix(CtGateKind::kS) * ht;

  std::vector<Prefix> level = {Prefix{Mat2::Identity(), 0, 0}};
  for (int t = 0; t <= t_budget; ++t) {
    if (t > 0) {
      std::vector<Prefix> next;
      next.reserve(2 * level.size() + 1);
      if (t == 1) {
        next.push_back(
            Prefix{ct_gate_matrix(CtGateKind::kT),
                   std::uint32_t(1) << kLeadShift, 0});
      }
      for (const Prefix& p : level) {
        const std::uint32_t count_bits =
            std::uint32_t(p.nsyl + 1) << kCountShift;
        const std::uint32_t base =
            (p.code & ~(std::uint32_t(15) << kCountShift)) | count_bits;
        next.push_back(Prefix{p.m * ht, base, p.nsyl + 1});
        next.push_back(Prefix{p.m * sht,
                              base | (std::uint32_t(1) << (kSylShift + p.nsyl)),
                              p.nsyl + 1});
      }
      level = std::move(next);
    }
    auto& entries = db.levels[t];
    entries.reserve(level.size() * 24);
    for (const Prefix& p : level)
      for (std::uint32_t ci = 0; ci < 24; ++ci) {
        NormalForm nf;
        nf.code = p.code | ci;
        auto q = su2_quat(p.m * tab.mats[ci]);
        canonical_sign(&q);
        nf.q = q;
        entries.push_back(nf);
      }
    std::vector<int> all(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k)
      all[k] = static_cast<int>(k);
    db.level_trees[t].build(entries, std::move(all));
    for (std::size_t k = 0; k < entries.size(); ++k)
      if ((entries[k].code & kCliffordMask) == 0)
        db.identity_clifford[t].push_back(static_cast<int>(k));
  }
  std::vector<int> eps_leading;
  for (std::size_t k = 0; k < db.levels[t_budget].size(); ++k)
    if (((db.levels[t_budget][k].code >> kLeadShift) & 1) == 0)
      eps_leading.push_back(static_cast<int>(k));
  db.split_tree.build(db.levels[t_budget], std::move(eps_leading));
  return db;
}

void save_database(const SynthesisDatabase& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write database: " + path);
  out.write("CTDB1\n", 6);
  const std::int32_t budget = db.t_budget;
  out.write(reinterpret_cast<const char*>(&budget), sizeof budget);
  for (const auto& level : db.levels) {
    const std::uint64_t n = level.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (const NormalForm& nf : level) {
      out.write(reinterpret_cast<const char*>(nf.q.data()), 4 * sizeof(double));
      out.write(reinterpret_cast<const char*>(&nf.code), sizeof nf.code);
    }
  }
  if (!out) throw IoError("short write on database: " + path);
}

SynthesisDatabase load_or_build_database(int t_budget,
                                         const std::string& cache_path) {
  if (t_budget < 0 || t_budget > kHardCap)
    throw ValidationError("load_or_build_database: t_budget must be in 0..14");
  if (!cache_path.empty()) {
    std::ifstream in(cache_path, std::ios::binary);
    if (in) {
      char magic[6] = {};
      std::int32_t budget = -1;
      in.read(magic, 6);
      in.read(reinterpret_cast<char*>(&budget), sizeof budget);
      if (in && std::memcmp(magic, "CTDB1\n", 6) == 0 && budget == t_budget) {
        SynthesisDatabase db;
        db.t_budget = t_budget;
        db.levels.resize(t_budget + 1);
        db.level_trees.resize(t_budget + 1);
        db.identity_clifford.resize(t_budget + 1);
        bool ok = true;
        for (int t = 0; t <= t_budget && ok; ++t) {
          std::uint64_t n = 0;
          in.read(reinterpret_cast<char*>(&n), sizeof n);
          if (!in || n > (std::uint64_t(1) << 30)) {
            ok = false;
            break;
          }
          db.levels[t].resize(n);
          for (auto& nf : db.levels[t]) {
            in.read(reinterpret_cast<char*>(nf.q.data()), 4 * sizeof(double));
            in.read(reinterpret_cast<char*>(&nf.code), sizeof nf.code);
          }
          if (!in) ok = false;
        }
        if (ok) {
          for (int t = 0; t <= t_budget; ++t) {
            std::vector<int> all(db.levels[t].size());
            for (std::size_t k = 0; k < all.size(); ++k)
              all[k] = static_cast<int>(k);
            db.level_trees[t].build(db.levels[t], std::move(all));
            for (std::size_t k = 0; k < db.levels[t].size(); ++k)
              if ((db.levels[t][k].code & kCliffordMask) == 0)
                db.identity_clifford[t].push_back(static_cast<int>(k));
          }
          std::vector<int> eps_leading;
          for (std::size_t k = 0; k < db.levels[t_budget].size(); ++k)
            if (((db.levels[t_budget][k].code >> kLeadShift) & 1) == 0)
              eps_leading.push_back(static_cast<int>(k));
          db.split_tree.build(db.levels[t_budget], std::move(eps_leading));
          return db;
        }
      }
    }
  }
  SynthesisDatabase db = build_database(t_budget);
  if (!cache_path.empty()) save_database(db, cache_path);
  return db;
}

CliffordTSequence synth_rz(double theta, double eps,
                           const SynthesisDatabase& db) {
  Mat2 target = Mat2::Zero();
  target(0, 0) = std::polar(1.0, -theta / 2.0);
  target(1, 1) = std::polar(1.0, theta / 2.0);
  // multiples of pi/4 are representable exactly: insist on the exact class
  // regardless of eps. 1e-7 sits above the fp noise floor of the distance
  // (~sqrt(machine eps)) and far below the nearest distinct class (~0.14).
  const double k = std::round(theta / (kPi / 4.0));
  if (std::abs(theta - k * kPi / 4.0) < 1e-12)
    return synth_target(target, 1e-7, db);
  return synth_target(target, eps, db);
}

CliffordTSequence synth_u3(const Mat2& u, double eps,
                           const SynthesisDatabase& db) {
  if ((u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("synth_u3: input is not unitary");
  return synth_target(u, eps, db);
}

SynthesizedCircuit synth_circuit(const RotationCircuit& r, double eps,
                                 SynthesisStrategy strategy,
                                 const SynthesisDatabase& db) {
  if (r.n_qubits < 1) throw ValidationError("synth_circuit: empty circuit");
  for (const auto& op : r.ops) {
    const bool twoq =
        op.kind == RotOpKind::kCx || op.kind == RotOpKind::kCz;
    if (op.wires.size() != (twoq ? 2u : 1u))
      throw ValidationError("synth_circuit: bad wire count");
    for (const int w : op.wires)
      if (w < 0 || w >= r.n_qubits)
        throw ValidationError("synth_circuit: wire out of range");
    if (twoq && op.wires[0] == op.wires[1])
      throw ValidationError("synth_circuit: repeated wire");
  }

  SynthesizedCircuit out;
  out.circuit.n_qubits = r.n_qubits;
  out.circuit.phase = r.phase;

  const auto append_seq = [&](const CliffordTSequence& seq, int wire) {
    for (const CtGateKind g : seq.gates)
      out.circuit.ops.push_back(CtOp{g, wire, -1});
    out.circuit.phase *= std::polar(1.0, seq.global_phase);
    out.total_t_count += seq.t_count;
    out.per_gate_errors.push_back(seq.achieved_error);
  };
  const auto synth_at = [&](const Mat2& target, int wire, std::size_t where) {
    try {
      append_seq(synth_u3(target, eps, db), wire);
    } catch (const SynthesisError& e) {
      throw SynthesisError(
          "synth_circuit: op " + std::to_string(where) + ": " + e.what(),
          e.best_error, e.best_t_count);
    }
  };

  struct Run {
    std::vector<RotOp> ops;
    std::size_t first = 0;
    int n_rz = 0;
  };
  std::vector<Run> runs(r.n_qubits);

  const auto flush = [&](int w) {
    Run& run = runs[w];
    if (run.ops.empty()) return;
    if (strategy == SynthesisStrategy::kHybrid && run.n_rz >= 2) {
      Mat2 u = Mat2::Identity();
      for (const RotOp& op : run.ops) u = rot_op_matrix(op) * u;
      synth_at(u, w, run.first);
    } else {
      for (std::size_t k = 0; k < run.ops.size(); ++k) {
        const RotOp& op = run.ops[k];
        if (op.kind == RotOpKind::kRz) {
          try {
            append_seq(synth_rz(op.theta, eps, db), w);
          } catch (const SynthesisError& e) {
            throw SynthesisError("synth_circuit: op " +
                                     std::to_string(run.first + k) + ": " +
                                     e.what(),
                                 e.best_error, e.best_t_count);
          }
        } else {
          out.circuit.ops.push_back(CtOp{ct_kind_of(op.kind), op.wires[0], -1});
        }
      }
    }
    run.ops.clear();
    run.n_rz = 0;
  };

  for (std::size_t i = 0; i < r.ops.size(); ++i) {
    const RotOp& op = r.ops[i];
    if (op.kind == RotOpKind::kCx || op.kind == RotOpKind::kCz) {
      flush(op.wires[0]);
      flush(op.wires[1]);
      if (op.kind == RotOpKind::kCx) {
        out.circuit.ops.push_back(
            CtOp{CtGateKind::kCx, op.wires[0], op.wires[1]});
      } else {
        out.circuit.ops.push_back(CtOp{CtGateKind::kH, op.wires[1], -1});
        out.circuit.ops.push_back(
            CtOp{CtGateKind::kCx, op.wires[0], op.wires[1]});
        out.circuit.ops.push_back(CtOp{CtGateKind::kH, op.wires[1], -1});
      }
    } else {
      Run& run = runs[op.wires[0]];
      if (run.ops.empty()) run.first = i;
      run.ops.push_back(op);
      run.n_rz += (op.kind == RotOpKind::kRz);
    }
  }
  for (int w = 0; w < r.n_qubits; ++w) flush(w);
  return out;
}

Mat clifford_t_unitary(const CliffordTCircuit& c) {
  if (c.n_qubits < 1 || c.n_qubits > 10)
    throw ValidationError("clifford_t_unitary: need 1..10 qubits");
  const std::int64_t dim = std::int64_t(1) << c.n_qubits;
  Mat u = Mat::Identity(dim, dim);
  const auto bit = [&](int w) {
    return std::int64_t(1) << (c.n_qubits - 1 - w);
  };
  const cplx im(0.0, 1.0);
  for (const auto& op : c.ops) {
    if (op.a < 0 || op.a >= c.n_qubits ||
        (op.kind == CtGateKind::kCx &&
         (op.b < 0 || op.b >= c.n_qubits || op.b == op.a)))
      throw ValidationError("clifford_t_unitary: wire out of range");
    switch (op.kind) {
      case CtGateKind::kH: {
        const std::int64_t m = bit(op.a);
        const double s = 1.0 / std::sqrt(2.0);
        for (std::int64_t row = 0; row < dim; ++row) {
          if (row & m) continue;
          const Eigen::RowVectorXcd a = u.row(row), b = u.row(row | m);
          u.row(row) = s * (a + b);
          u.row(row | m) = s * (a - b);
        }
        break;
      }
      case CtGateKind::kX: {
        const std::int64_t m = bit(op.a);
        for (std::int64_t row = 0; row < dim; ++row)
          if (!(row & m)) u.row(row).swap(u.row(row | m));
        break;
      }
      case CtGateKind::kCx: {
        const std::int64_t mc = bit(op.a), mt = bit(op.b);
        for (std::int64_t row = 0; row < dim; ++row)
          if ((row & mc) && !(row & mt)) u.row(row).swap(u.row(row | mt));
        break;
      }
      default: {
        cplx f;
        switch (op.kind) {
          case CtGateKind::kS:
            f = im;
            break;
          case CtGateKind::kSdg:
            f = -im;
            break;
          case CtGateKind::kT:
            f = std::polar(1.0, kPi / 4.0);
            break;
          case CtGateKind::kTdg:
            f = std::polar(1.0, -kPi / 4.0);
            break;
          default:
            f = -1.0;  // kZ
        }
        const std::int64_t m = bit(op.a);
        for (std::int64_t row = 0; row < dim; ++row)
          if (row & m) u.row(row) *= f;
        break;
      }
    }
  }
  return c.phase * u;
}

std::string serialize_ct_circuit(const CliffordTCircuit& c) {
  std::string s = "CTQ1 " + std::to_string(c.n_qubits) + " " +
                  std::to_string(c.t_count()) + "\n";
  for (const auto& op : c.ops) {
    switch (op.kind) {
      case CtGateKind::kH:
        s += "H ";
        break;
      case CtGateKind::kS:
        s += "S ";
        break;
      case CtGateKind::kSdg:
        s += "SDG ";
        break;
      case CtGateKind::kT:
        s += "T ";
        break;
      case CtGateKind::kTdg:
        s += "TDG ";
        break;
      case CtGateKind::kX:
        s += "X ";
        break;
      case CtGateKind::kZ:
        s += "Z ";
        break;
      case CtGateKind::kCx:
        s += "CX ";
        break;
    }
    s += std::to_string(op.a);
    if (op.kind == CtGateKind::kCx) s += " " + std::to_string(op.b);
    s += "\n";
  }
  return s;
}

CliffordTCircuit parse_ct_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok) || tok != "CTQ1")
    throw ParseError("clifford+t circuit: bad magic");
  CliffordTCircuit c;
  int want_t = 0;
  if (!(in >> c.n_qubits >> want_t) || c.n_qubits < 1 || want_t < 0)
    throw ParseError("clifford+t circuit: bad header");
  const auto read_wire = [&](int* w) {
    if (!(in >> *w) || *w < 0 || *w >= c.n_qubits)
      throw ParseError("clifford+t circuit: bad wire");
  };
  while (in >> tok) {
    CtOp op;
    if (tok == "H")
      op.kind = CtGateKind::kH;
    else if (tok == "S")
      op.kind = CtGateKind::kS;
    else if (tok == "SDG")
      op.kind = CtGateKind::kSdg;
    else if (tok == "T")
      op.kind = CtGateKind::kT;
    else if (tok == "TDG")
      op.kind = CtGateKind::kTdg;
    else if (tok == "X")
      op.kind = CtGateKind::kX;
    else if (tok == "Z")
      op.kind = CtGateKind::kZ;
    else if (tok == "CX")
      op.kind = CtGateKind::kCx;
    else
      throw ParseError("clifford+t circuit: unknown gate '" + tok + "'");
    read_wire(&op.a);
    if (op.kind == CtGateKind::kCx) {
      read_wire(&op.b);
      if (op.b == op.a) throw ParseError("clifford+t circuit: repeated wire");
    }
    c.ops.push_back(op);
  }
  if (c.t_count() != want_t)
    throw ParseError("clifford+t circuit: t_count mismatch");
  return c;
}

void save_ct_circuit(const CliffordTCircuit& c, const std::string& path) {
  write_text_file(path, serialize_ct_circuit(c));
}

CliffordTCircuit load_ct_circuit(const std::string& path) {
  return parse_ct_circuit(read_text_file(path));
}

}  // namespace tnprep
