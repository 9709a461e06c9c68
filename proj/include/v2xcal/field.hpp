#pragma once

#include "v2xcal/aggregate.hpp"
#include "v2xcal/trace.hpp"

namespace v2xcal {

// How delivery is established from a field log.
enum class FieldPdrMode {
  // PairById when every relevant record has a message id, else ExpectedCadence.
  Auto,
  // A Sent record counts as delivered if a Received record with the same
  // message type and id exists.
  PairById,
  // Received records per bin divided by the number of messages the sender's
  // cadence would have produced while the vehicle was in that bin.
  ExpectedCadence,
};

struct FieldPdrOptions {
  double bin_width = 20.0;
  MessageType message_type = MessageType::Spat;
  FieldPdrMode mode = FieldPdrMode::Auto;
  double expected_rate = 10.0;  // Hz, for ExpectedCadence
  Enu rsu_position{};
};

// Observed PDR-vs-distance curve from an OBU log.
PdrCurve field_pdr_curve(const Trace& trace, const FieldPdrOptions& options);

}  // namespace v2xcal
