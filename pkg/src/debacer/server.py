"""HTTP JSON API consumed by the annotation/review UI.

Endpoints:
  GET  /api/speeches?status=unlabeled&limit=N   suggestion queue + context
  POST /api/labels   {minute_id, order, label, source}
  POST /api/retrain  kicks a background bootstrap retrain
  GET  /api/partitions/{minute_id}
  GET  /api/export/labels                        CSV incl. sources
  GET  /api/status                               fingerprint + queue size

Every JSON response carries the current model fingerprint and whether a
retrain is running. Label writes are serialized behind one lock;
suggestions are always served from the last *completed* model, never a
half-trained one. If a static asset directory is configured it is served
at the root, so the UI and API share one origin.
"""

from __future__ import annotations

import threading
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import annotate
from .annotate import AnnotationState, save_annotation_csv
from .corpus import Corpus
from .errors import DataError, DebacerError
from .partition import partition_corpus
from .pipeline import PipelineSpec, TrainedPipeline


class LabelRequest(BaseModel):
    minute_id: str
    order: int
    label: int
    source: str = "human"


class ServerState:
    def __init__(
        self,
        corpus: Corpus,
        agenda_label: str,
        state: AnnotationState | None = None,
        pipeline: TrainedPipeline | None = None,
        bootstrap_spec: PipelineSpec = annotate.BOOTSTRAP_SPEC,
        state_path: str | Path | None = None,
    ):
        self.corpus = corpus
        self.agenda_label = agenda_label
        self.state = state or AnnotationState()
        self.pipeline = pipeline
        self.bootstrap_spec = bootstrap_spec
        self.state_path = state_path
        self.lock = threading.Lock()
        self.retraining = False
        self._retrain_thread: threading.Thread | None = None

    def persist(self) -> None:
        """Write the annotation CSV; called under the writer lock."""
        if self.state_path is not None:
            save_annotation_csv(self.state, self.state_path)

    def meta(self) -> dict:
        return {
            "model_fingerprint": self.state.model_fingerprint,
            "retraining": self.retraining,
        }

    def retrain(self) -> None:
        pipeline = annotate.bootstrap_train(
            self.state, self.corpus, self.agenda_label, self.bootstrap_spec
        )
        # partitions refresh under the new model as well
        partition_corpus(self.corpus, pipeline, self.agenda_label)
        with self.lock:
            self.pipeline = pipeline
            annotate.suggest(self.state, self.corpus, pipeline, self.agenda_label)

    def start_retrain(self) -> bool:
        with self.lock:
            if self.retraining:
                return False
            self.retraining = True

        def job():
            try:
                self.retrain()
            finally:
                self.retraining = False

        self._retrain_thread = threading.Thread(target=job, daemon=True)
        self._retrain_thread.start()
        return True

    def wait_retrain(self, timeout: float | None = None) -> None:
        if self._retrain_thread is not None:
            self._retrain_thread.join(timeout)


def create_app(server_state: ServerState, static_dir: str | Path | None = None,
               token: str | None = None) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        # uvicorn re-raises the caught signal after graceful shutdown, so
        # persistence must happen here, not in caller cleanup code
        with server_state.lock:
            server_state.persist()

    app = FastAPI(title="debacer annotation API", lifespan=lifespan)
    app.state.server = server_state

    def check_token(request: Request):
        if token and request.headers.get("authorization") != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="bad or missing token")

    @app.exception_handler(DebacerError)
    async def domain_error(request: Request, exc: DebacerError):
        status = 409 if isinstance(exc, DataError) else 400
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc), **server_state.meta()},
        )

    @app.get("/api/status", dependencies=[Depends(check_token)])
    def status():
        st = server_state
        return {
            **st.meta(),
            "agenda_label": st.agenda_label,
            "queue_size": len(st.state.queue),
            "labels": st.state.counts_by_source(),
            "audit_log_size": len(st.state.audit_log),
        }

    @app.get("/api/speeches", dependencies=[Depends(check_token)])
    def speeches(status: str = "unlabeled", limit: int = 20):
        st = server_state
        if status != "unlabeled":
            raise HTTPException(status_code=400, detail=f"unknown status {status!r}")
        with st.lock:
            queue = st.state.queue[: max(limit, 0)]
            return {
                **st.meta(),
                "suggestions": [s.to_dict() for s in queue],
                "queue_size": len(st.state.queue),
            }

    @app.post("/api/labels", dependencies=[Depends(check_token)])
    def post_label(req: LabelRequest):
        st = server_state
        with st.lock:
            annotate.apply_label(
                st.state, st.corpus, (req.minute_id, req.order), req.label, req.source
            )
            st.persist()  # annotation work is never lost to a crash
            return {
                **st.meta(),
                "accepted": True,
                "queue_size": len(st.state.queue),
                "audit_log_size": len(st.state.audit_log),
            }

    @app.post("/api/retrain", dependencies=[Depends(check_token)])
    def retrain():
        started = server_state.start_retrain()
        return {**server_state.meta(), "started": started}

    @app.get("/api/partitions/{minute_id}", dependencies=[Depends(check_token)])
    def partitions(minute_id: str):
        st = server_state
        found = {
            key[1]: result.to_dict()
            for key, result in st.corpus.block_store.items()
            if key[0] == minute_id
        }
        if not found:
            raise HTTPException(status_code=404, detail=f"no partitions for {minute_id!r}")
        speeches_by_item = {}
        for item_label in found:
            item = st.corpus.agenda_item((minute_id, item_label))
            speeches_by_item[item_label] = [
                {
                    "order": s.order,
                    "debater": s.debater,
                    "is_moderator": s.is_moderator,
                    "text": s.text,
                }
                for s in item.speeches
            ]
        return {
            **st.meta(),
            "minute_id": minute_id,
            "partitions": found,
            "speeches": speeches_by_item,
        }

    @app.get("/api/export/labels", dependencies=[Depends(check_token)])
    def export_labels():
        st = server_state
        with st.lock:
            csv_text = annotate.export_labels_csv(st.state)
        return PlainTextResponse(
            csv_text,
            media_type="text/csv",
            headers={"X-Model-Fingerprint": str(st.state.model_fingerprint)},
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(app: FastAPI, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="info")
