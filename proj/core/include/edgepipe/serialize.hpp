#pragma once

#include <nlohmann/json.hpp>

#include "edgepipe/device.hpp"
#include "edgepipe/model.hpp"
#include "edgepipe/partition.hpp"
#include "edgepipe/systolic.hpp"

namespace edgepipe {

void to_json(nlohmann::json& j, const LayerSpec& layer);
void from_json(const nlohmann::json& j, LayerSpec& layer);

void to_json(nlohmann::json& j, const ModelSpec& model);
void from_json(const nlohmann::json& j, ModelSpec& model);

void to_json(nlohmann::json& j, const SweepConfig& config);
void from_json(const nlohmann::json& j, SweepConfig& config);

void to_json(nlohmann::json& j, const AcceleratorProfile& profile);
void from_json(const nlohmann::json& j, AcceleratorProfile& profile);

void to_json(nlohmann::json& j, const Partition& partition);
void from_json(const nlohmann::json& j, Partition& partition);

void to_json(nlohmann::json& j, const CycleReport& report);

void to_json(nlohmann::json& j, const PartitionEvaluation& evaluation);

}  // namespace edgepipe
