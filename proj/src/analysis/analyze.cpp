#include <algorithm>

#include "fliplab/analysis.hpp"

namespace fliplab {

std::string to_string(AnalysisCase c) { return c == AnalysisCase::Arcs ? "arcs" : "cycles"; }

namespace {

void shift(TriangularCertificate& c, Window w) { c.window = w; }

}  // namespace

AnalysisReport analyze(const MoveSequence& s, const AnalysisParams& p) {
  p.validate();
  AnalysisReport rep;
  rep.params = p;
  rep.sequence_length = s.size();
  if (s.empty()) throw InvalidArgument("cannot analyze an empty move sequence");
  const auto ones = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](const Move& m) { return m.is_one(); }));
  rep.one_move_fraction = static_cast<double>(ones) / static_cast<double>(s.size());

  if (ones > 0 && rep.one_move_fraction >= p.one_move_frac) {
    rep.kind = AnalysisCase::Arcs;
    rep.arcs = case1_arcs(s, p);
    rep.certificate = rep.arcs->certificate;
    if (rep.arcs->not_found) rep.diagnostics.push_back(*rep.arcs->not_found);
  } else {
    rep.kind = AnalysisCase::Cycles;
    rep.selection = select_window(s, p);
    if (!rep.selection->found) {
      rep.diagnostics.push_back(*rep.selection->not_found);
      rep.certificate = assemble_certificate(Window{1, s.size()}, {});
      rep.certificate.stopped = rep.selection->not_found;
    } else {
      const Window win = rep.selection->window;
      rep.cycles = harvest_cycles(slice(s, win), p);
      auto& h = *rep.cycles;
      shift(h.two_cycles.certificate, win);
      shift(h.certificate, win);
      if (h.core.not_found) rep.diagnostics.push_back(*h.core.not_found);
      if (h.certificate.stopped) rep.diagnostics.push_back(*h.certificate.stopped);
      rep.certificate =
          h.two_cycles.certificate.size() > h.certificate.size() ? h.two_cycles.certificate : h.certificate;
    }
  }
  rep.window_moves = slice(s, rep.certificate.window);
  rep.rank = rep.certificate.rank;
  rep.ratio = rep.certificate.window.length ? static_cast<double>(rep.rank) / static_cast<double>(rep.certificate.window.length) : 0.0;
  return rep;
}

}  // namespace fliplab
