#include "mwsn/routing/messages.hpp"

#include <sstream>

namespace mwsn::routing {

std::string_view to_string(Readiness r) {
  switch (r) {
    case Readiness::Discard: return "Discard";
    case Readiness::Moderate: return "Moderate";
    case Readiness::High: return "High";
  }
  return "?";
}

bool is_data(const Packet& p) { return std::holds_alternative<DataPacket>(p); }

std::string_view kind_name(const Packet& p) {
  struct Name {
    std::string_view operator()(const HelloPacket&) const { return "HELLO"; }
    std::string_view operator()(const DaPacket&) const { return "DA"; }
    std::string_view operator()(const DataPacket&) const { return "DATA"; }
    std::string_view operator()(const RreqMessage&) const { return "RREQ"; }
    std::string_view operator()(const RrepMessage&) const { return "RREP"; }
    std::string_view operator()(const RerrMessage&) const { return "RERR"; }
  };
  return std::visit(Name{}, p);
}

std::uint32_t packet_bytes(const Packet& p, std::uint32_t control_bytes,
                           std::uint32_t data_bytes) {
  return is_data(p) ? data_bytes : control_bytes;
}

namespace {

std::ostream& operator<<(std::ostream& os, PrecinctCoord c) {
  return os << c.row << ',' << c.col;
}

template <typename T>
void join(std::ostream& os, const std::vector<T>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  if (v.empty()) os << '-';
}

}  // namespace

std::string describe(const Packet& p) {
  std::ostringstream os;
  os.precision(9);
  std::visit(
      [&os](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HelloPacket>) {
          os << "HELLO sender=" << m.sender << " surplus=" << m.surplus
             << " p=" << m.p_fusion << " vid=" << m.vid;
        } else if constexpr (std::is_same_v<T, DaPacket>) {
          os << "DA vid=" << m.vid << " gen=" << m.generation_time << " sender=" << m.sender
             << " reading=" << m.reading << " dst=" << m.destination;
        } else if constexpr (std::is_same_v<T, DataPacket>) {
          os << "DATA id=" << m.id << " src=" << m.source << " dst=" << m.destination
             << " gen=" << m.generation_time << " originals=";
          join(os, m.originals);
          os << " path=";
          join(os, m.path);
        } else if constexpr (std::is_same_v<T, RreqMessage>) {
          os << "RREQ src=" << m.source_address << " sprec=" << m.source_precinct
             << " seq=" << m.sequence_no << " bid=" << m.broadcast_id
             << " hops=" << m.hop_count << " dst=" << m.destination_address
             << " maxE=" << m.max_surplus_energy;
        } else if constexpr (std::is_same_v<T, RrepMessage>) {
          os << "RREP src=" << m.source_address << " dst=" << m.destination_address
             << " dprec=" << m.destination_precinct << " seq=" << m.sequence_number
             << " hops=" << m.hop_count << " ready=" << to_string(m.readiness_factor)
             << " maxE=" << m.max_surplus_energy << " life=" << m.lifetime << " back=";
          join(os, m.route_back);
        } else {
          os << "RERR src=" << m.source_address << " dst=" << m.unreachable_destination
             << " seq=" << m.destination_sequence << " back=";
          join(os, m.route_back);
        }
      },
      p);
  return os.str();
}

}  // namespace mwsn::routing
