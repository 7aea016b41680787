/** Thin typed client for the statviz HTTP API. */
export class ApiRequestError extends Error {
    status;
    body;
    constructor(status, body) {
        super(body.diagnostic ?? body.error);
        this.status = status;
        this.body = body;
    }
}
export class ApiClient {
    base;
    fetchFn;
    constructor(base = "", fetchFn = fetch) {
        this.base = base.replace(/\/$/, "");
        this.fetchFn = fetchFn;
    }
    async json(path, init) {
        const response = await this.fetchFn(`${this.base}${path}`, init);
        const text = await response.text();
        let body = {};
        try {
            body = text ? JSON.parse(text) : {};
        }
        catch {
            body = { error: `bad JSON from ${path}` };
        }
        if (!response.ok) {
            throw new ApiRequestError(response.status, body);
        }
        return body;
    }
    createSession(statement, seed = 0, top = 8) {
        return this.json("/api/sessions", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ statement, seed, top }),
        });
    }
    listCandidates(sessionId, top = 8) {
        return this.json(`/api/sessions/${sessionId}/candidates?top=${top}`);
    }
    refine(sessionId, candidateId, replace) {
        return this.json(`/api/sessions/${sessionId}/candidates/${candidateId}/refine`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ replace }),
        }).then((r) => r.candidate);
    }
    icons(query, slotKind, k = 8) {
        const params = new URLSearchParams({ query, k: String(k) });
        if (slotKind)
            params.set("slot_kind", slotKind);
        return this.json(`/api/assets/icons?${params}`).then((r) => r.results);
    }
    palettes(query, k = 8) {
        const params = new URLSearchParams({ query, k: String(k) });
        return this.json(`/api/assets/palettes?${params}`).then((r) => r.results);
    }
    saveTemplate(candidateId, label) {
        return this.json("/api/templates", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ candidate_id: candidateId, label }),
        }).then((r) => r.template_id);
    }
    listTemplates() {
        return this.json("/api/templates").then((r) => r.templates);
    }
    async exportSvg(candidateId) {
        const response = await this.fetchFn(`${this.base}/api/export/${candidateId}.svg`);
        if (!response.ok) {
            throw new ApiRequestError(response.status, (await response.json()));
        }
        return response.text();
    }
    async templateSvg(templateId) {
        const response = await this.fetchFn(`${this.base}/api/templates/${templateId}/svg`);
        if (!response.ok) {
            throw new ApiRequestError(response.status, (await response.json()));
        }
        return response.text();
    }
}
