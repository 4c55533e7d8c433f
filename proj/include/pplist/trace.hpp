#ifndef PPLIST_TRACE_HPP
#define PPLIST_TRACE_HPP

#include "pplist/groups.hpp"
#include "pplist/keys.hpp"
#include "pplist/pseudonym.hpp"
#include "pplist/registry.hpp"

namespace pplist {

/// Y_u = C2 - C1 * x_t (the ElGamal decryption of the pseudonym).
G2 open_pseudonym(const Scalar& tracer_secret, const Pseudonym& pseudonym);

/// Re-verifies the record's aggregate signature, then opens its pseudonym.
/// Throws Error "untraceable: invalid record" if the record is not delivered
/// or its signature does not verify, and Error on a non-tracer key.
PublicKey trace(const KeyPair& tracer, const DeliveryRecord& record);

}  // namespace pplist

#endif  // PPLIST_TRACE_HPP
