#pragma once

#include <string>

#include <json.hpp>

#include "localops/choi.hpp"
#include "localops/games.hpp"
#include "localops/layout.hpp"
#include "localops/losr.hpp"
#include "localops/sep.hpp"
#include "localops/witness.hpp"

namespace localops {

using nlohmann::json;

// Matrix: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// Layout: {"parties": [{"din": d, "dout": d}, ...]}.
json layout_to_json(const SystemLayout& layout);
SystemLayout layout_from_json(const json& j);

// Channel: {"layout": ..., "form": "kraus"|"choi", "ordering": "global"|"grouped",
// "kraus": [matrix...]} or {"choi": matrix}.
json channel_to_json(const KrausChannel& ch);
json channel_to_json(const ChoiOperator& j);
KrausChannel kraus_from_json(const json& j);
// Accepts both forms; grouped Choi payloads are regrouped to global.
ChoiOperator choi_from_json(const json& j);

// Certificate: {"space": "Q"|"hermitian", "layout": ..., "terms":
// [{"weight": w, "factors": [matrix...]}], "target": matrix} with the target
// and factors in party-grouped ordering.
json certificate_to_json(const SeparableCertificate& cert);
SeparableCertificate certificate_from_json(const json& j);

// Shared-randomness mixture: {"layout": ..., "normalization": z, "terms":
// [{"prob": p, "channels": [channel...]}]}.
json losr_to_json(const LosrForm& form);
LosrForm losr_from_json(const json& j);

// Game: {"q": n, "pi": [...], "rho": [matrix...], "V": [matrix...],
// "accept": matrix, "dims": {"referee": d, "layout": ...}}.
json game_to_json(const Game& game);
Game game_from_json(const json& j);

// Witness export: {"H": matrix, "audit": {"min_value": v, "factors": [...]},
// "value": v, "margin": m, "certifies": bool}.
json witness_to_json(const Witness& w);

// File helpers; parse failures and I/O failures become usage_error.
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

} // namespace localops
