import logging
from typing import Dict, List, Optional, Tuple

from cellschur.core.combinatorics import Partition

logger = logging.getLogger(__name__)

Matrix = List[List[int]]


class GramStore:
    """Integer Gram matrices keyed by (structure name, λ).

    Kept in memory; with a MongoDB URI every matrix is also upserted into the
    ``gram_matrices`` collection and loaded back on the next start.
    """

    def __init__(self, mongodb_uri: Optional[str] = None, database_name: str = "cellschur"):
        self._matrices: Dict[Tuple[str, Partition], Matrix] = {}
        self._collection = None

        if mongodb_uri:
            try:
                from pymongo import MongoClient
                client = MongoClient(mongodb_uri)
                db = client[database_name]
                self._collection = db["gram_matrices"]

                self._collection.create_index(
                    [("structure", 1), ("lambda", 1)],
                    unique=True,
                    name="structure_lambda_unique",
                )

                self._load_from_db()
                logger.info("GramStore: MongoDB persistence enabled")
            except Exception as e:
                self._collection = None
                logger.warning(f"GramStore: MongoDB init failed, using in-memory only: {e}")

    def _load_from_db(self):
        if self._collection is None:
            return

        for doc in self._collection.find():
            try:
                key = (doc["structure"], Partition(tuple(int(p) for p in doc["lambda"])))
                self._matrices[key] = [[int(v) for v in row] for row in doc["matrix"]]
            except (KeyError, TypeError, ValueError) as e:
                logger.warning(f"GramStore: skipping malformed document {doc.get('_id')}: {e}")

        logger.info(f"Loaded {len(self._matrices)} Gram matrices")

    def _persist(self, key: Tuple[str, Partition]):
        if self._collection is None or key not in self._matrices:
            return

        structure, lam = key
        # entries outgrow 64-bit BSON integers, so they are stored as strings
        lam_doc = [str(part) for part in lam.parts]
        try:
            self._collection.update_one(
                {"structure": structure, "lambda": lam_doc},
                {"$set": {
                    "structure": structure,
                    "lambda": lam_doc,
                    "matrix": [[str(v) for v in row] for row in self._matrices[key]],
                }},
                upsert=True,
            )
        except Exception as e:
            logger.warning(f"GramStore: could not persist {structure} {lam}: {e}")

    @property
    def persistent(self) -> bool:
        return self._collection is not None

    def get(self, structure: str, lam: Partition) -> Optional[Matrix]:
        return self._matrices.get((structure, lam))

    def put(self, structure: str, lam: Partition, matrix: Matrix):
        self._matrices[(structure, lam)] = matrix
        self._persist((structure, lam))

    def __contains__(self, key: Tuple[str, Partition]) -> bool:
        return key in self._matrices

    def __len__(self) -> int:
        return len(self._matrices)
