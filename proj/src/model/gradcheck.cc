// Copyright 2026 The pelt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pelt/model/gradcheck.h"

#include <algorithm>
#include <numeric>

#include "pelt/common/random.h"
#include "pelt/model/model.h"

namespace pelt::model {

numerics::GradCheckResult check_mlm_gradients(const MlmGradCheckSetup& setup,
                                              const numerics::GradCheckOptions& options) {
  ModelConfig config;
  config.dim = setup.dim;
  config.layers = setup.layers;
  config.heads = setup.heads;
  config.vocab = setup.vocab;
  config.max_len = setup.max_len;
  config.ln_eps = setup.ln_eps;
  config.seed = setup.seed;
  Model<double> model = Model<double>::init(config);
  if (setup.init_scale != 0.02) {
    const double factor = setup.init_scale / 0.02;
    for (auto& e : model.params()) {
      if (e.tensor.rank() != 2) continue;
      for (double& v : e.tensor.values()) v *= factor;
    }
  }

  Rng rng = Rng(setup.seed).fork(7);
  std::vector<MaskedSentence> batch(setup.sentences);
  for (auto& s : batch) {
    s.tokens.resize(setup.length);
    for (auto& t : s.tokens) {
      t = static_cast<TokenId>(corpus::kSpecialCount + rng.below(setup.vocab - corpus::kSpecialCount));
    }
    std::vector<std::size_t> order(setup.length);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    order.resize(std::min(setup.masks_per_sentence, setup.length));
    std::sort(order.begin(), order.end());
    for (std::size_t p : order) {
      s.positions.push_back(p);
      s.targets.push_back(s.tokens[p]);
      s.tokens[p] = corpus::kMask;
    }
  }
  const numerics::LossClosure loss = [&](numerics::ParamStore<double>&, bool with_grad) {
    return mlm_loss(model, std::span<const MaskedSentence>(batch), with_grad);
  };
  return numerics::grad_check(loss, model.params(), options);
}

}  // namespace pelt::model
