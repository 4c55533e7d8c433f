#include "pplist/trace.hpp"

#include "pplist/aggregate.hpp"

namespace pplist {

G2 open_pseudonym(const Scalar& tracer_secret, const Pseudonym& pseudonym) {
    return pseudonym.c2 - pseudonym.c1 * tracer_secret;
}

PublicKey trace(const KeyPair& tracer, const DeliveryRecord& record) {
    require_role(tracer.role(), Role::tracer, "trace");
    if (!record.sigma) throw Error("untraceable: invalid record (not delivered)");
    if (!verify_aggregate(*record.sigma, record.pseudonym, record.ya, record.message))
        throw Error("untraceable: invalid record");
    G2 y = open_pseudonym(tracer.secret(), record.pseudonym);
    if (y.is_identity()) throw Error("untraceable: invalid record (opens to identity)");
    return PublicKey(Role::user, y);
}

}  // namespace pplist
